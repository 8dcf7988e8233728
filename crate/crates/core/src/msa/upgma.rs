use super::DistanceMatrix;

#[derive(Debug, Clone, PartialEq)]
pub enum TreeNode {
    Leaf(usize),
    Join { left: usize, right: usize, height: f64 },
}

/// Rooted binary guide tree. Nodes are stored in creation order: the `n`
/// leaves first, then one join per merge; the root is the last node.
#[derive(Debug, Clone, PartialEq)]
pub struct GuideTree {
    nodes: Vec<TreeNode>,
}

impl GuideTree {
    pub fn nodes(&self) -> &[TreeNode] {
        &self.nodes
    }

    pub fn root(&self) -> Option<usize> {
        self.nodes.len().checked_sub(1)
    }

    pub fn leaf_count(&self) -> usize {
        self.nodes
            .iter()
            .filter(|n| matches!(n, TreeNode::Leaf(_)))
            .count()
    }

    pub fn height(&self, node: usize) -> f64 {
        match self.nodes[node] {
            TreeNode::Leaf(_) => 0.0,
            TreeNode::Join { height, .. } => height,
        }
    }

    /// Node indices in post-order (children before parents).
    pub fn post_order(&self) -> Vec<usize> {
        let Some(root) = self.root() else {
            return Vec::new();
        };
        let mut out = Vec::with_capacity(self.nodes.len());
        let mut stack = vec![(root, false)];
        while let Some((n, expanded)) = stack.pop() {
            match self.nodes[n] {
                TreeNode::Join { left, right, .. } if !expanded => {
                    stack.push((n, true));
                    stack.push((right, false));
                    stack.push((left, false));
                }
                _ => out.push(n),
            }
        }
        out
    }
}

/// Average-linkage clustering. Among equal minimum distances the pair with
/// the smallest `(i, j)` cluster slots wins; the merged cluster takes slot `i`.
pub fn upgma(matrix: &DistanceMatrix) -> GuideTree {
    let n = matrix.n();
    let mut nodes: Vec<TreeNode> = (0..n).map(TreeNode::Leaf).collect();
    if n <= 1 {
        return GuideTree { nodes };
    }
    let mut d: Vec<f64> = (0..n * n).map(|k| matrix.get(k / n, k % n)).collect();
    let mut active: Vec<bool> = vec![true; n];
    let mut node_of: Vec<usize> = (0..n).collect();
    let mut size: Vec<usize> = vec![1; n];

    for _ in 0..n - 1 {
        let mut best = (f64::INFINITY, usize::MAX, usize::MAX);
        for i in 0..n {
            if !active[i] {
                continue;
            }
            for j in i + 1..n {
                if active[j] && d[i * n + j] < best.0 {
                    best = (d[i * n + j], i, j);
                }
            }
        }
        let (dist, i, j) = best;
        let (li, lj) = (node_of[i], node_of[j]);
        let floor = match (&nodes[li], &nodes[lj]) {
            (TreeNode::Join { height: a, .. }, TreeNode::Join { height: b, .. }) => a.max(*b),
            (TreeNode::Join { height, .. }, _) | (_, TreeNode::Join { height, .. }) => *height,
            _ => 0.0,
        };
        nodes.push(TreeNode::Join {
            left: li,
            right: lj,
            height: (dist / 2.0).max(floor),
        });
        let (si, sj) = (size[i] as f64, size[j] as f64);
        for k in 0..n {
            if active[k] && k != i && k != j {
                let v = (d[i * n + k] * si + d[j * n + k] * sj) / (si + sj);
                d[i * n + k] = v;
                d[k * n + i] = v;
            }
        }
        active[j] = false;
        size[i] += size[j];
        node_of[i] = nodes.len() - 1;
    }
    GuideTree { nodes }
}
