use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use super::{AlignedRow, Alignment, Alphabet, AlphabetKind, Sequence, GAP};
use crate::error::{Error, Result};

/// Parameters of the synthetic homologous-family generator.
#[derive(Debug, Clone, PartialEq)]
pub struct GenConfig {
    pub alphabet: AlphabetKind,
    /// The tree has `2^tree_depth` leaves.
    pub tree_depth: u32,
    pub root_length: usize,
    /// Per-site, per-branch event probabilities.
    pub sub_rate: f64,
    pub ins_rate: f64,
    pub del_rate: f64,
    pub seed: u64,
}

impl GenConfig {
    pub fn validate(&self) -> Result<()> {
        for (name, r) in [
            ("sub_rate", self.sub_rate),
            ("ins_rate", self.ins_rate),
            ("del_rate", self.del_rate),
        ] {
            if !(0.0..=1.0).contains(&r) {
                return Err(Error::InvalidRates(format!("{name} = {r} is not a probability")));
            }
        }
        let total = self.sub_rate + self.ins_rate + self.del_rate;
        if total > 1.0 {
            return Err(Error::InvalidRates(format!("rates sum to {total} > 1")));
        }
        if self.tree_depth == 0 || self.tree_depth > 20 {
            return Err(Error::InvalidConfig("tree_depth must be in 1..=20".into()));
        }
        if self.root_length == 0 {
            return Err(Error::InvalidConfig("root_length must be at least 1".into()));
        }
        Ok(())
    }
}

/// Global column order, kept as a singly linked list so that a column can be
/// spliced in right after any existing one.
struct Columns {
    next: Vec<Option<usize>>,
    head: Option<usize>,
}

impl Columns {
    fn with_root(len: usize) -> Self {
        let next = (0..len)
            .map(|i| if i + 1 < len { Some(i + 1) } else { None })
            .collect();
        Columns {
            next,
            head: Some(0),
        }
    }

    fn insert_after(&mut self, col: usize) -> usize {
        let id = self.next.len();
        self.next.push(self.next[col]);
        self.next[col] = Some(id);
        id
    }

    /// Position of every column id in the final left-to-right order.
    fn order(&self) -> Vec<usize> {
        let mut pos = vec![0; self.next.len()];
        let mut cur = self.head;
        let mut i = 0;
        while let Some(c) = cur {
            pos[c] = i;
            i += 1;
            cur = self.next[c];
        }
        pos
    }
}

type Lineage = Vec<(usize, u8)>;

struct Evolver<'a> {
    cfg: &'a GenConfig,
    symbols: &'a [u8],
    rng: ChaCha8Rng,
    columns: Columns,
    leaves: Vec<Lineage>,
}

impl Evolver<'_> {
    fn random_symbol(&mut self) -> u8 {
        self.symbols[self.rng.gen_range(0..self.symbols.len())]
    }

    fn substitute(&mut self, current: u8) -> u8 {
        let n = self.symbols.len();
        if n < 2 {
            return current;
        }
        let pick = self.rng.gen_range(0..n - 1);
        let c = self.symbols[pick];
        if c == current {
            self.symbols[n - 1]
        } else {
            c
        }
    }

    fn mutate(&mut self, parent: &Lineage) -> Lineage {
        let (sub, ins, del) = (self.cfg.sub_rate, self.cfg.ins_rate, self.cfg.del_rate);
        let mut out = Vec::with_capacity(parent.len() + 4);
        for (i, &(col, res)) in parent.iter().enumerate() {
            let u: f64 = self.rng.gen();
            if u < sub {
                let r = self.substitute(res);
                out.push((col, r));
            } else if u < sub + ins {
                out.push((col, res));
                let new_col = self.columns.insert_after(col);
                let r = self.random_symbol();
                out.push((new_col, r));
            } else if u < sub + ins + del && !(out.is_empty() && i + 1 == parent.len()) {
                // deleted; the final site survives if nothing else did
            } else {
                out.push((col, res));
            }
        }
        out
    }

    fn descend(&mut self, node: Lineage, depth_left: u32) {
        if depth_left == 0 {
            self.leaves.push(node);
            return;
        }
        let left = self.mutate(&node);
        self.descend(left, depth_left - 1);
        let right = self.mutate(&node);
        self.descend(right, depth_left - 1);
    }
}

/// Evolves `2^tree_depth` leaves from a random root along a balanced binary
/// tree and returns them with their true alignment.
///
/// Output is a pure function of `config`.
pub fn generate_family(config: &GenConfig) -> Result<(Vec<Sequence>, Alignment)> {
    config.validate()?;
    let alphabet = Alphabet::new(config.alphabet);
    let mut ev = Evolver {
        cfg: config,
        symbols: alphabet.canonical(),
        rng: ChaCha8Rng::seed_from_u64(config.seed),
        columns: Columns::with_root(config.root_length),
        leaves: Vec::new(),
    };
    let root: Lineage = (0..config.root_length)
        .map(|c| (c, ev.random_symbol()))
        .collect();
    ev.descend(root, config.tree_depth);

    let order = ev.columns.order();
    let mut used = vec![false; order.len()];
    for leaf in &ev.leaves {
        for &(c, _) in leaf {
            used[order[c]] = true;
        }
    }
    // compact to the columns some leaf actually occupies
    let mut compact = vec![usize::MAX; order.len()];
    let mut width = 0;
    for (p, &u) in used.iter().enumerate() {
        if u {
            compact[p] = width;
            width += 1;
        }
    }

    let digits = ev.leaves.len().to_string().len();
    let mut seqs = Vec::with_capacity(ev.leaves.len());
    let mut rows = Vec::with_capacity(ev.leaves.len());
    for (i, leaf) in ev.leaves.iter().enumerate() {
        let id = format!("seq{i:0digits$}");
        let mut row = vec![GAP; width];
        for &(c, r) in leaf {
            row[compact[order[c]]] = r;
        }
        seqs.push(Sequence::new(
            id.clone(),
            leaf.iter().map(|&(_, r)| r).collect::<Vec<_>>(),
            i,
        ));
        rows.push(AlignedRow {
            id,
            source_index: i,
            residues: row,
        });
    }
    Ok((seqs, Alignment::new(rows)?))
}
