//! The sequential aligner and the ancestor-template machinery.
//!
//! `progressive_align` is the per-bucket aligner: k-mer distance matrix,
//! UPGMA guide tree, and profile-profile dynamic programming. The rest of the
//! module extracts consensus ancestors, realigns local alignments against a
//! fixed template profile and glues the results.

mod consensus;
mod distance;
mod dp;
mod external;
mod profile;
mod progressive;
mod sp;
mod template;
mod upgma;

pub use consensus::consensus;
pub use distance::{build_distance_matrix, DistanceMatrix};
pub use dp::{align_profiles, merge_alignments, ProfileAlignment, Step};
pub use external::external_align;
pub use profile::{profile_from_alignment, Profile};
pub use progressive::{progressive_align, progressive_align_with_stats, DpStats};
pub use sp::sp_score;
pub use template::{merge_tweaked, realign_to_template, realign_to_template_counted, TweakedAlignment};
pub use upgma::{upgma, GuideTree, TreeNode};
