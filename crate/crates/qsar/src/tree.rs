//! Decision-tree machinery over binary fingerprint features: a shared
//! flattened tree representation, Gini-split classification trees, and
//! Newton-step regression trees for boosting.
//!
//! Split search accumulates per-feature statistics by iterating each
//! sample's set bits (fingerprints are sparse), so a node costs
//! O(samples x popcount) rather than O(samples x n_bits).

use chem::fingerprint::{morgan_fill, FingerprintConfig, MorganScratch};
use chem::Molecule;
use rand::Rng;
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

/// Row-major packed fingerprint matrix.
#[derive(Debug, Clone)]
pub struct FeatureMatrix {
    pub n_bits: u32,
    pub blocks: usize,
    pub n_rows: usize,
    data: Vec<u64>,
}

impl FeatureMatrix {
    pub fn from_molecules(mols: &[Molecule], cfg: &FingerprintConfig) -> FeatureMatrix {
        let blocks = cfg.blocks();
        let mut data = vec![0u64; blocks * mols.len()];
        data.par_chunks_mut(blocks.max(1) * 256)
            .zip(mols.par_chunks(256))
            .for_each(|(out, chunk)| {
                let mut scratch = MorganScratch::default();
                for (i, mol) in chunk.iter().enumerate() {
                    morgan_fill(mol, cfg, &mut scratch, &mut out[i * blocks..(i + 1) * blocks]);
                }
            });
        FeatureMatrix {
            n_bits: cfg.n_bits,
            blocks,
            n_rows: mols.len(),
            data,
        }
    }

    #[inline]
    pub fn row(&self, i: usize) -> &[u64] {
        &self.data[i * self.blocks..(i + 1) * self.blocks]
    }

    #[inline]
    pub fn get_bit(&self, row: usize, feature: u32) -> bool {
        let r = self.row(row);
        (r[(feature / 64) as usize] >> (feature % 64)) & 1 == 1
    }
}

/// One tree as parallel arrays (feature < 0 marks a leaf). The threshold is
/// always 0.5 over binary features; bit clear goes left, bit set goes right.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Tree {
    pub feature: Vec<i32>,
    pub threshold: Vec<f64>,
    pub left: Vec<i32>,
    pub right: Vec<i32>,
    pub value: Vec<f64>,
}

impl Tree {
    fn new() -> Tree {
        Tree {
            feature: Vec::new(),
            threshold: Vec::new(),
            left: Vec::new(),
            right: Vec::new(),
            value: Vec::new(),
        }
    }

    fn push_leaf(&mut self, value: f64) -> i32 {
        self.feature.push(-1);
        self.threshold.push(0.0);
        self.left.push(-1);
        self.right.push(-1);
        self.value.push(value);
        (self.feature.len() - 1) as i32
    }

    fn push_split(&mut self, feature: u32, left: i32, right: i32) -> i32 {
        self.feature.push(feature as i32);
        self.threshold.push(0.5);
        self.left.push(left);
        self.right.push(right);
        self.value.push(0.0);
        (self.feature.len() - 1) as i32
    }

    pub fn n_nodes(&self) -> usize {
        self.feature.len()
    }

    pub fn root(&self) -> i32 {
        (self.feature.len() - 1) as i32
    }

    /// Evaluate against a packed fingerprint row.
    #[inline]
    pub fn eval(&self, row: &[u64]) -> f64 {
        let mut node = self.root() as usize;
        loop {
            let f = self.feature[node];
            if f < 0 {
                return self.value[node];
            }
            let bit = (row[(f as usize) / 64] >> (f as usize % 64)) & 1;
            node = if bit == 1 {
                self.right[node] as usize
            } else {
                self.left[node] as usize
            };
        }
    }

    pub fn multiply_leaves(&mut self, factor: f64) {
        for i in 0..self.feature.len() {
            if self.feature[i] < 0 {
                self.value[i] *= factor;
            }
        }
    }
}

/// How many features a node considers for its split.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum FeatureSubset {
    All,
    Sqrt,
    Fraction(f64),
}

impl FeatureSubset {
    pub fn count(&self, n_bits: u32) -> usize {
        match self {
            FeatureSubset::All => n_bits as usize,
            FeatureSubset::Sqrt => (n_bits as f64).sqrt().round().max(1.0) as usize,
            FeatureSubset::Fraction(f) => ((n_bits as f64 * f).round() as usize).clamp(1, n_bits as usize),
        }
    }
}

/// Scratch buffers shared across nodes of one tree build.
struct SplitScratch {
    count1: Vec<u32>,
    pos1: Vec<u32>,
    grad1: Vec<f64>,
    hess1: Vec<f64>,
    feature_pool: Vec<u32>,
}

impl SplitScratch {
    fn new(n_bits: u32) -> SplitScratch {
        SplitScratch {
            count1: vec![0; n_bits as usize],
            pos1: vec![0; n_bits as usize],
            grad1: vec![0.0; n_bits as usize],
            hess1: vec![0.0; n_bits as usize],
            feature_pool: (0..n_bits).collect(),
        }
    }
}

/// Grow a Gini-impurity classification tree. `weights` are bootstrap
/// multiplicities (zero-weight samples must not appear in `indices`).
/// Leaves hold the weighted positive fraction.
pub struct GiniParams<'a> {
    pub matrix: &'a FeatureMatrix,
    pub labels: &'a [bool],
    pub weights: &'a [u32],
    pub max_depth: u32,
    pub min_leaf: u32,
    pub subset: FeatureSubset,
}

pub fn grow_gini_tree(params: &GiniParams, indices: &mut [u32], rng: &mut ChaCha8Rng) -> Tree {
    let mut tree = Tree::new();
    let mut scratch = SplitScratch::new(params.matrix.n_bits);
    gini_node(params, indices, 0, rng, &mut tree, &mut scratch);
    tree
}

fn gini_node(
    params: &GiniParams,
    indices: &mut [u32],
    depth: u32,
    rng: &mut ChaCha8Rng,
    tree: &mut Tree,
    scratch: &mut SplitScratch,
) -> i32 {
    let mut total_w: u64 = 0;
    let mut total_p: u64 = 0;
    for &i in indices.iter() {
        let w = params.weights[i as usize] as u64;
        total_w += w;
        if params.labels[i as usize] {
            total_p += w;
        }
    }
    let leaf_value = total_p as f64 / total_w as f64;
    if total_p == 0 || total_p == total_w || depth >= params.max_depth || total_w < 2 * params.min_leaf as u64 {
        return tree.push_leaf(leaf_value);
    }

    // Per-feature weighted counts on the bit-set side.
    let k = params.subset.count(params.matrix.n_bits);
    let candidates = sample_features(&mut scratch.feature_pool, k, rng);
    for &f in &candidates {
        scratch.count1[f as usize] = 0;
        scratch.pos1[f as usize] = 0;
    }
    // Sparse accumulation over all set bits; cheaper than per-candidate scans
    // and the extra counts are simply unused.
    if k < params.matrix.n_bits as usize {
        for f in 0..params.matrix.n_bits as usize {
            scratch.count1[f] = 0;
            scratch.pos1[f] = 0;
        }
    } else {
        scratch.count1.fill(0);
        scratch.pos1.fill(0);
    }
    for &i in indices.iter() {
        let w = params.weights[i as usize];
        let y = params.labels[i as usize];
        let row = params.matrix.row(i as usize);
        for (b, &bits) in row.iter().enumerate() {
            let mut bits = bits;
            while bits != 0 {
                let f = b * 64 + bits.trailing_zeros() as usize;
                scratch.count1[f] += w;
                if y {
                    scratch.pos1[f] += w;
                }
                bits &= bits - 1;
            }
        }
    }

    let weighted_gini = |n: u64, p: u64| -> f64 {
        if n == 0 {
            return 0.0;
        }
        let n_f = n as f64;
        let p_f = p as f64;
        let q_f = n_f - p_f;
        n_f * (1.0 - (p_f / n_f).powi(2) - (q_f / n_f).powi(2))
    };
    let parent = weighted_gini(total_w, total_p);
    let mut best: Option<(f64, u32)> = None;
    for &f in &candidates {
        let n1 = scratch.count1[f as usize] as u64;
        let p1 = scratch.pos1[f as usize] as u64;
        let n0 = total_w - n1;
        let p0 = total_p - p1;
        if n1 < params.min_leaf as u64 || n0 < params.min_leaf as u64 {
            continue;
        }
        let gain = parent - weighted_gini(n0, p0) - weighted_gini(n1, p1);
        if gain > 1e-12 && best.map_or(true, |(g, _)| gain > g) {
            best = Some((gain, f));
        }
    }
    let Some((_, feature)) = best else {
        return tree.push_leaf(leaf_value);
    };

    let mid = partition_by_bit(params.matrix, indices, feature);
    let (left_idx, right_idx) = indices.split_at_mut(mid);
    // Recursion is bounded by max_depth (<= 32).
    let left = gini_node(params, left_idx, depth + 1, rng, tree, scratch);
    let right = gini_node(params, right_idx, depth + 1, rng, tree, scratch);
    tree.push_split(feature, left, right)
}

/// Grow a regression tree on gradient/hessian targets with Newton leaf
/// values, for logistic-loss boosting.
pub struct NewtonParams<'a> {
    pub matrix: &'a FeatureMatrix,
    pub grad: &'a [f64],
    pub hess: &'a [f64],
    pub max_depth: u32,
    pub min_leaf: u32,
    pub lambda: f64,
}

pub fn grow_newton_tree(params: &NewtonParams, indices: &mut [u32]) -> Tree {
    let mut tree = Tree::new();
    let mut scratch = SplitScratch::new(params.matrix.n_bits);
    newton_node(params, indices, 0, &mut tree, &mut scratch);
    tree
}

fn newton_node(params: &NewtonParams, indices: &mut [u32], depth: u32, tree: &mut Tree, scratch: &mut SplitScratch) -> i32 {
    let mut g_total = 0.0;
    let mut h_total = 0.0;
    for &i in indices.iter() {
        g_total += params.grad[i as usize];
        h_total += params.hess[i as usize];
    }
    let leaf_value = g_total / (h_total + params.lambda);
    if depth >= params.max_depth || indices.len() < 2 * params.min_leaf as usize {
        return tree.push_leaf(leaf_value);
    }

    scratch.grad1.fill(0.0);
    scratch.hess1.fill(0.0);
    scratch.count1.fill(0);
    for &i in indices.iter() {
        let g = params.grad[i as usize];
        let h = params.hess[i as usize];
        let row = params.matrix.row(i as usize);
        for (b, &bits) in row.iter().enumerate() {
            let mut bits = bits;
            while bits != 0 {
                let f = b * 64 + bits.trailing_zeros() as usize;
                scratch.grad1[f] += g;
                scratch.hess1[f] += h;
                scratch.count1[f] += 1;
                bits &= bits - 1;
            }
        }
    }

    let objective = |g: f64, h: f64| g * g / (h + params.lambda);
    let parent = objective(g_total, h_total);
    let n = indices.len() as u32;
    let mut best: Option<(f64, u32)> = None;
    for f in 0..params.matrix.n_bits {
        let n1 = scratch.count1[f as usize];
        let n0 = n - n1;
        if n1 < params.min_leaf || n0 < params.min_leaf {
            continue;
        }
        let g1 = scratch.grad1[f as usize];
        let h1 = scratch.hess1[f as usize];
        let gain = objective(g_total - g1, h_total - h1) + objective(g1, h1) - parent;
        if gain > 1e-12 && best.map_or(true, |(g, _)| gain > g) {
            best = Some((gain, f));
        }
    }
    let Some((_, feature)) = best else {
        return tree.push_leaf(leaf_value);
    };

    let mid = partition_by_bit(params.matrix, indices, feature);
    let (left_idx, right_idx) = indices.split_at_mut(mid);
    let left = newton_node(params, left_idx, depth + 1, tree, scratch);
    let right = newton_node(params, right_idx, depth + 1, tree, scratch);
    tree.push_split(feature, left, right)
}

/// Stable partition: bit-clear rows first; returns the boundary.
fn partition_by_bit(matrix: &FeatureMatrix, indices: &mut [u32], feature: u32) -> usize {
    let mut buffer: Vec<u32> = Vec::with_capacity(indices.len());
    let mut mid = 0usize;
    for &i in indices.iter() {
        if !matrix.get_bit(i as usize, feature) {
            mid += 1;
        }
    }
    buffer.extend(indices.iter().copied().filter(|&i| !matrix.get_bit(i as usize, feature)));
    buffer.extend(indices.iter().copied().filter(|&i| matrix.get_bit(i as usize, feature)));
    indices.copy_from_slice(&buffer);
    mid
}

/// First `k` entries of a partial Fisher-Yates shuffle, returned sorted so
/// split ties resolve toward the lowest feature index.
fn sample_features(pool: &mut [u32], k: usize, rng: &mut ChaCha8Rng) -> Vec<u32> {
    let n = pool.len();
    let k = k.min(n);
    if k == n {
        return pool.to_vec();
    }
    for i in 0..k {
        let j = rng.gen_range(i..n);
        pool.swap(i, j);
    }
    let mut out = pool[..k].to_vec();
    out.sort_unstable();
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use chem::parse_smiles;
    use rand_chacha::rand_core::SeedableRng;

    fn toy_matrix() -> (FeatureMatrix, Vec<bool>) {
        let mols: Vec<Molecule> = ["CCO", "CCN", "CCC", "CNN", "COO", "CCCC", "NCCN", "OCCO"]
            .iter()
            .map(|s| parse_smiles(s).unwrap())
            .collect();
        let labels: Vec<bool> = mols
            .iter()
            .map(|m| m.atoms().iter().any(|a| a.element == chem::Element::N))
            .collect();
        (FeatureMatrix::from_molecules(&mols, &FingerprintConfig::default()), labels)
    }

    #[test]
    fn gini_tree_fits_training_data() {
        let (matrix, labels) = toy_matrix();
        let weights = vec![1u32; matrix.n_rows];
        let mut indices: Vec<u32> = (0..matrix.n_rows as u32).collect();
        let params = GiniParams {
            matrix: &matrix,
            labels: &labels,
            weights: &weights,
            max_depth: 16,
            min_leaf: 1,
            subset: FeatureSubset::All,
        };
        let mut rng = ChaCha8Rng::seed_from_u64(0);
        let tree = grow_gini_tree(&params, &mut indices, &mut rng);
        for i in 0..matrix.n_rows {
            let p = tree.eval(matrix.row(i));
            assert_eq!(p >= 0.5, labels[i], "row {i}");
        }
    }

    #[test]
    fn tree_build_is_deterministic() {
        let (matrix, labels) = toy_matrix();
        let weights = vec![1u32; matrix.n_rows];
        let params = GiniParams {
            matrix: &matrix,
            labels: &labels,
            weights: &weights,
            max_depth: 8,
            min_leaf: 1,
            subset: FeatureSubset::Sqrt,
        };
        let grow = || {
            let mut indices: Vec<u32> = (0..matrix.n_rows as u32).collect();
            let mut rng = ChaCha8Rng::seed_from_u64(42);
            grow_gini_tree(&params, &mut indices, &mut rng)
        };
        assert_eq!(grow(), grow());
    }

    #[test]
    fn feature_subset_counts() {
        assert_eq!(FeatureSubset::Sqrt.count(1024), 32);
        assert_eq!(FeatureSubset::Fraction(0.1).count(1024), 102);
        assert_eq!(FeatureSubset::All.count(1024), 1024);
    }
}
