//! Serialized tree-ensemble classifiers: training entry points, single
//! prediction, and the vectorized batch path (batched fingerprinting plus
//! blocked traversal of a flattened forest).

use crate::dataset::BioassayDataset;
use crate::metrics::EvalMetrics;
use crate::tree::{
    grow_gini_tree, grow_newton_tree, FeatureMatrix, FeatureSubset, GiniParams, NewtonParams, Tree,
};
use chem::fingerprint::{morgan_fingerprint, FingerprintConfig};
use chem::Molecule;
use rand::Rng;
use rand_chacha::rand_core::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};
use std::path::Path;
use std::sync::OnceLock;
use thiserror::Error;

const MODEL_FORMAT_VERSION: u32 = 1;
/// L2 regularization for Newton leaf values in boosting.
const BOOST_LAMBDA: f64 = 1.0;

#[derive(Debug, Clone, Error)]
pub enum TrainError {
    #[error("training set is empty")]
    EmptyDataset,
    #[error("training set contains a single class")]
    SingleClassDataset,
}

#[derive(Debug, Clone, Error)]
pub enum ModelIoError {
    #[error("io error: {0}")]
    Io(String),
    #[error("malformed model file: {0}")]
    Malformed(String),
    #[error("unsupported model format version {0}")]
    Version(u32),
}

/// Algorithm plus its hyperparameters, as stored in the model file.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "algorithm", rename_all = "kebab-case")]
pub enum ModelSpec {
    DecisionTree {
        max_depth: u32,
        min_leaf: u32,
    },
    RandomForest {
        n_trees: u32,
        max_depth: u32,
        feature_subset: FeatureSubset,
    },
    ExtraTrees {
        n_trees: u32,
        max_depth: u32,
        feature_subset: FeatureSubset,
    },
    GradientBoosting {
        rounds: u32,
        max_depth: u32,
        learning_rate: f64,
    },
}

impl ModelSpec {
    pub fn algorithm_name(&self) -> &'static str {
        match self {
            ModelSpec::DecisionTree { .. } => "decision-tree",
            ModelSpec::RandomForest { .. } => "random-forest",
            ModelSpec::ExtraTrees { .. } => "extra-trees",
            ModelSpec::GradientBoosting { .. } => "gradient-boosting",
        }
    }

    fn is_boosting(&self) -> bool {
        matches!(self, ModelSpec::GradientBoosting { .. })
    }
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct TreeEnsembleModel {
    pub format_version: u32,
    pub fingerprint_cfg: FingerprintConfig,
    pub spec: ModelSpec,
    pub seed: u64,
    /// Additive bias; log-odds prior for boosting, zero otherwise.
    pub base_score: f64,
    pub trees: Vec<Tree>,
    pub metrics: Option<EvalMetrics>,
    #[serde(skip, default)]
    flat: OnceLock<FlatForest>,
}

impl PartialEq for TreeEnsembleModel {
    fn eq(&self, other: &Self) -> bool {
        self.format_version == other.format_version
            && self.fingerprint_cfg == other.fingerprint_cfg
            && self.spec == other.spec
            && self.seed == other.seed
            && self.base_score == other.base_score
            && self.trees == other.trees
    }
}

/// Per-round logistic training loss, recorded for boosting runs.
#[derive(Debug, Clone, Default)]
pub struct TrainDiagnostics {
    pub boosting_loss: Vec<f64>,
}

/// Train on an explicit row subset of a prebuilt feature matrix; the AutoML
/// loop uses this to share one matrix across candidates.
pub fn train_on_matrix(
    matrix: &FeatureMatrix,
    labels: &[bool],
    rows: &[usize],
    fingerprint_cfg: FingerprintConfig,
    spec: ModelSpec,
    seed: u64,
) -> Result<(TreeEnsembleModel, TrainDiagnostics), TrainError> {
    if rows.is_empty() {
        return Err(TrainError::EmptyDataset);
    }
    let n_pos = rows.iter().filter(|&&i| labels[i]).count();
    if n_pos == 0 || n_pos == rows.len() {
        return Err(TrainError::SingleClassDataset);
    }

    let mut diagnostics = TrainDiagnostics::default();
    let (trees, base_score) = match spec {
        ModelSpec::DecisionTree { max_depth, min_leaf } => {
            let weights = vec![1u32; matrix.n_rows];
            let params = GiniParams {
                matrix,
                labels,
                weights: &weights,
                max_depth,
                min_leaf,
                subset: FeatureSubset::All,
            };
            let mut indices: Vec<u32> = rows.iter().map(|&i| i as u32).collect();
            let mut rng = ChaCha8Rng::seed_from_u64(seed);
            (vec![grow_gini_tree(&params, &mut indices, &mut rng)], 0.0)
        }
        ModelSpec::RandomForest {
            n_trees,
            max_depth,
            feature_subset,
        } => (
            grow_forest(matrix, labels, rows, n_trees, max_depth, feature_subset, seed, true),
            0.0,
        ),
        ModelSpec::ExtraTrees {
            n_trees,
            max_depth,
            feature_subset,
        } => (
            grow_forest(matrix, labels, rows, n_trees, max_depth, feature_subset, seed, false),
            0.0,
        ),
        ModelSpec::GradientBoosting {
            rounds,
            max_depth,
            learning_rate,
        } => {
            let (trees, base, loss) = boost(matrix, labels, rows, rounds, max_depth, learning_rate);
            diagnostics.boosting_loss = loss;
            (trees, base)
        }
    };

    Ok((
        TreeEnsembleModel {
            format_version: MODEL_FORMAT_VERSION,
            fingerprint_cfg,
            spec,
            seed,
            base_score,
            trees,
            metrics: None,
            flat: OnceLock::new(),
        },
        diagnostics,
    ))
}

/// Train over a whole dataset.
pub fn train_model(
    train: &BioassayDataset,
    fingerprint_cfg: FingerprintConfig,
    spec: ModelSpec,
    seed: u64,
) -> Result<TreeEnsembleModel, TrainError> {
    if train.is_empty() {
        return Err(TrainError::EmptyDataset);
    }
    let mols: Vec<Molecule> = train.records.iter().map(|r| r.molecule.clone()).collect();
    let matrix = FeatureMatrix::from_molecules(&mols, &fingerprint_cfg);
    let labels = train.labels();
    let rows: Vec<usize> = (0..train.len()).collect();
    train_on_matrix(&matrix, &labels, &rows, fingerprint_cfg, spec, seed).map(|(m, _)| m)
}

#[allow(clippy::too_many_arguments)]
fn grow_forest(
    matrix: &FeatureMatrix,
    labels: &[bool],
    rows: &[usize],
    n_trees: u32,
    max_depth: u32,
    feature_subset: FeatureSubset,
    seed: u64,
    bootstrap: bool,
) -> Vec<Tree> {
    (0..n_trees)
        .into_par_iter()
        .map(|t| {
            // Per-tree stream keyed by (seed, tree index): identical forests
            // regardless of thread scheduling.
            let mut rng = ChaCha8Rng::seed_from_u64(seed ^ (t as u64).wrapping_mul(0x9E37_79B9_7F4A_7C15));
            let mut weights = vec![0u32; matrix.n_rows];
            let mut indices: Vec<u32> = Vec::with_capacity(rows.len());
            if bootstrap {
                for _ in 0..rows.len() {
                    let pick = rows[rng.gen_range(0..rows.len())];
                    weights[pick] += 1;
                }
                indices.extend(rows.iter().filter(|&&i| weights[i] > 0).map(|&i| i as u32));
            } else {
                for &i in rows {
                    weights[i] = 1;
                }
                indices.extend(rows.iter().map(|&i| i as u32));
            }
            let params = GiniParams {
                matrix,
                labels,
                weights: &weights,
                max_depth,
                min_leaf: 1,
                subset: feature_subset,
            };
            grow_gini_tree(&params, &mut indices, &mut rng)
        })
        .collect()
}

fn boost(
    matrix: &FeatureMatrix,
    labels: &[bool],
    rows: &[usize],
    rounds: u32,
    max_depth: u32,
    learning_rate: f64,
) -> (Vec<Tree>, f64, Vec<f64>) {
    let n = rows.len();
    let pos = rows.iter().filter(|&&i| labels[i]).count() as f64;
    let p0 = (pos / n as f64).clamp(1e-6, 1.0 - 1e-6);
    let base = (p0 / (1.0 - p0)).ln();

    let mut margins = vec![0.0f64; matrix.n_rows];
    for &i in rows {
        margins[i] = base;
    }
    let mut grad = vec![0.0f64; matrix.n_rows];
    let mut hess = vec![0.0f64; matrix.n_rows];
    let mut trees = Vec::with_capacity(rounds as usize);
    let mut losses = Vec::with_capacity(rounds as usize);

    for _round in 0..rounds {
        for &i in rows {
            let p = sigmoid(margins[i]);
            let y = labels[i] as u8 as f64;
            grad[i] = y - p;
            hess[i] = (p * (1.0 - p)).max(1e-12);
        }
        let params = NewtonParams {
            matrix,
            grad: &grad,
            hess: &hess,
            max_depth,
            min_leaf: 1,
            lambda: BOOST_LAMBDA,
        };
        let mut indices: Vec<u32> = rows.iter().map(|&i| i as u32).collect();
        let mut tree = grow_newton_tree(&params, &mut indices);
        tree.multiply_leaves(learning_rate);
        for &i in rows {
            margins[i] += tree.eval(matrix.row(i));
        }
        trees.push(tree);

        let loss: f64 = rows
            .iter()
            .map(|&i| {
                let p = sigmoid(margins[i]).clamp(1e-12, 1.0 - 1e-12);
                if labels[i] {
                    -p.ln()
                } else {
                    -(1.0 - p).ln()
                }
            })
            .sum::<f64>()
            / n as f64;
        losses.push(loss);
    }
    (trees, base, losses)
}

#[inline]
fn sigmoid(x: f64) -> f64 {
    1.0 / (1.0 + (-x).exp())
}

/// Forest flattened into contiguous arrays for blocked traversal.
#[derive(Debug, Clone)]
struct FlatForest {
    feature: Vec<u32>,
    children: Vec<[u32; 2]>,
    value: Vec<f64>,
    roots: Vec<u32>,
}

const LEAF: u32 = u32::MAX;

fn flatten(trees: &[Tree]) -> FlatForest {
    let total: usize = trees.iter().map(|t| t.n_nodes()).sum();
    let mut flat = FlatForest {
        feature: Vec::with_capacity(total),
        children: Vec::with_capacity(total),
        value: Vec::with_capacity(total),
        roots: Vec::with_capacity(trees.len()),
    };
    for tree in trees {
        let offset = flat.feature.len() as u32;
        flat.roots.push(offset + tree.root() as u32);
        for i in 0..tree.n_nodes() {
            if tree.feature[i] < 0 {
                flat.feature.push(LEAF);
                flat.children.push([0, 0]);
            } else {
                flat.feature.push(tree.feature[i] as u32);
                flat.children.push([offset + tree.left[i] as u32, offset + tree.right[i] as u32]);
            }
            flat.value.push(tree.value[i]);
        }
    }
    flat
}

impl TreeEnsembleModel {
    fn flat(&self) -> &FlatForest {
        self.flat.get_or_init(|| flatten(&self.trees))
    }

    /// Probability from one packed fingerprint row, summing trees in index
    /// order (the batch path reproduces this order exactly).
    pub fn predict_row(&self, row: &[u64]) -> f64 {
        let mut sum = 0.0;
        for tree in &self.trees {
            sum += tree.eval(row);
        }
        self.finalize(sum)
    }

    #[inline]
    fn finalize(&self, tree_sum: f64) -> f64 {
        if self.spec.is_boosting() {
            sigmoid(self.base_score + tree_sum)
        } else {
            tree_sum / self.trees.len() as f64
        }
    }

    /// Single-molecule prediction: fingerprint then per-tree traversal.
    pub fn predict(&self, mol: &Molecule) -> f64 {
        let fp = morgan_fingerprint(mol, &self.fingerprint_cfg);
        self.predict_row(fp.blocks())
    }

    /// Batch prediction: fingerprints are computed in bulk with reused
    /// buffers and the flattened forest is walked tree-major over blocks of
    /// molecules. Elementwise identical to `predict`.
    pub fn predict_batch(&self, mols: &[Molecule]) -> Vec<f64> {
        let matrix = FeatureMatrix::from_molecules(mols, &self.fingerprint_cfg);
        self.predict_matrix(&matrix)
    }

    pub fn predict_matrix(&self, matrix: &FeatureMatrix) -> Vec<f64> {
        let flat = self.flat();
        let n = matrix.n_rows;
        let mut out = vec![0.0f64; n];
        const BLOCK: usize = 128;
        out.par_chunks_mut(BLOCK).enumerate().for_each(|(chunk_idx, sums)| {
            let base = chunk_idx * BLOCK;
            for &root in &flat.roots {
                let mut j = 0;
                // Four interleaved walks hide node-load latency.
                while j + 4 <= sums.len() {
                    let rows = [
                        matrix.row(base + j),
                        matrix.row(base + j + 1),
                        matrix.row(base + j + 2),
                        matrix.row(base + j + 3),
                    ];
                    let mut node = [root as usize; 4];
                    let mut live = [true; 4];
                    let mut pending = 4;
                    while pending > 0 {
                        for k in 0..4 {
                            if !live[k] {
                                continue;
                            }
                            let f = flat.feature[node[k]];
                            if f == LEAF {
                                sums[j + k] += flat.value[node[k]];
                                live[k] = false;
                                pending -= 1;
                            } else {
                                let bit = (rows[k][(f >> 6) as usize] >> (f & 63)) & 1;
                                node[k] = flat.children[node[k]][bit as usize] as usize;
                            }
                        }
                    }
                    j += 4;
                }
                while j < sums.len() {
                    let row = matrix.row(base + j);
                    let mut node = root as usize;
                    loop {
                        let f = flat.feature[node];
                        if f == LEAF {
                            sums[j] += flat.value[node];
                            break;
                        }
                        let bit = (row[(f >> 6) as usize] >> (f & 63)) & 1;
                        node = flat.children[node][bit as usize] as usize;
                    }
                    j += 1;
                }
            }
        });
        for v in out.iter_mut() {
            *v = self.finalize(*v);
        }
        out
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string(self).expect("model serializes")
    }

    pub fn from_json(text: &str) -> Result<TreeEnsembleModel, ModelIoError> {
        let model: TreeEnsembleModel =
            serde_json::from_str(text).map_err(|e| ModelIoError::Malformed(e.to_string()))?;
        if model.format_version != MODEL_FORMAT_VERSION {
            return Err(ModelIoError::Version(model.format_version));
        }
        model.fingerprint_cfg.validate().map_err(|e| ModelIoError::Malformed(e.to_string()))?;
        Ok(model)
    }

    pub fn save(&self, path: &Path) -> Result<(), ModelIoError> {
        std::fs::write(path, self.to_json()).map_err(|e| ModelIoError::Io(format!("{}: {e}", path.display())))
    }

    pub fn load(path: &Path) -> Result<TreeEnsembleModel, ModelIoError> {
        let text =
            std::fs::read_to_string(path).map_err(|e| ModelIoError::Io(format!("{}: {e}", path.display())))?;
        TreeEnsembleModel::from_json(&text)
    }
}

/// Accuracy and ROC-AUC of a model over a labeled set.
pub fn evaluate(model: &TreeEnsembleModel, test: &BioassayDataset) -> EvalMetrics {
    let mols: Vec<Molecule> = test.records.iter().map(|r| r.molecule.clone()).collect();
    let scores = model.predict_batch(&mols);
    crate::metrics::evaluate_scores(&scores, &test.labels())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::dataset::BioassayDataset;
    use chem::parse_smiles;

    fn nitrogen_dataset(n: usize) -> BioassayDataset {
        let cfg = molgen::GenConfig {
            min_heavy: 6,
            max_heavy: 20,
            ..molgen::GenConfig::default()
        };
        let mols = molgen::random_corpus(99, n, &cfg);
        let pairs: Vec<(String, bool)> = mols
            .iter()
            .map(|m| {
                let label = m.atoms().iter().any(|a| a.element == chem::Element::N);
                (chem::write_smiles(m), label)
            })
            .collect();
        BioassayDataset::from_pairs(pairs, "synthetic-nitrogen").unwrap().0
    }

    #[test]
    fn separable_training_reaches_high_accuracy() {
        let ds = nitrogen_dataset(500);
        let model = train_model(
            &ds,
            FingerprintConfig::default(),
            ModelSpec::RandomForest {
                n_trees: 64,
                max_depth: 16,
                feature_subset: FeatureSubset::Sqrt,
            },
            7,
        )
        .unwrap();
        let metrics = evaluate(&model, &ds);
        assert!(metrics.accuracy >= 0.99, "train accuracy {}", metrics.accuracy);
    }

    #[test]
    fn single_class_is_rejected() {
        let pairs = vec![("CCO".to_string(), true), ("CC".to_string(), true)];
        let ds = BioassayDataset::from_pairs(pairs, "x").unwrap().0;
        let err = train_model(
            &ds,
            FingerprintConfig::default(),
            ModelSpec::DecisionTree {
                max_depth: 4,
                min_leaf: 1,
            },
            0,
        )
        .unwrap_err();
        assert!(matches!(err, TrainError::SingleClassDataset));
    }

    #[test]
    fn same_seed_same_serialization() {
        let ds = nitrogen_dataset(200);
        let spec = ModelSpec::RandomForest {
            n_trees: 32,
            max_depth: 10,
            feature_subset: FeatureSubset::Sqrt,
        };
        let m1 = train_model(&ds, FingerprintConfig::default(), spec.clone(), 5).unwrap();
        let m2 = train_model(&ds, FingerprintConfig::default(), spec, 5).unwrap();
        assert_eq!(m1.to_json(), m2.to_json());
    }

    #[test]
    fn batch_equals_mapped_predict() {
        let ds = nitrogen_dataset(300);
        let mols: Vec<Molecule> = ds.records.iter().map(|r| r.molecule.clone()).collect();
        for spec in [
            ModelSpec::DecisionTree {
                max_depth: 12,
                min_leaf: 2,
            },
            ModelSpec::RandomForest {
                n_trees: 48,
                max_depth: 12,
                feature_subset: FeatureSubset::Sqrt,
            },
            ModelSpec::ExtraTrees {
                n_trees: 48,
                max_depth: 12,
                feature_subset: FeatureSubset::Fraction(0.1),
            },
            ModelSpec::GradientBoosting {
                rounds: 60,
                max_depth: 3,
                learning_rate: 0.1,
            },
        ] {
            let model = train_model(&ds, FingerprintConfig::default(), spec, 3).unwrap();
            let batch = model.predict_batch(&mols);
            for (i, mol) in mols.iter().enumerate() {
                assert_eq!(batch[i], model.predict(mol), "algorithm {}", model.spec.algorithm_name());
            }
        }
    }

    #[test]
    fn hand_built_three_tree_forest() {
        // Tree A: bit 3 ? 1.0 : 0.0; Tree B: constant 0.5; Tree C: bit 7 ? 0.25 : 0.75.
        let mut a = Tree {
            feature: vec![],
            threshold: vec![],
            left: vec![],
            right: vec![],
            value: vec![],
        };
        a.feature = vec![-1, -1, 3];
        a.threshold = vec![0.0, 0.0, 0.5];
        a.left = vec![-1, -1, 0];
        a.right = vec![-1, -1, 1];
        a.value = vec![0.0, 1.0, 0.0];
        let b = Tree {
            feature: vec![-1],
            threshold: vec![0.0],
            left: vec![-1],
            right: vec![-1],
            value: vec![0.5],
        };
        let mut c = a.clone();
        c.feature[2] = 7;
        c.value = vec![0.75, 0.25, 0.0];
        let model = TreeEnsembleModel {
            format_version: 1,
            fingerprint_cfg: FingerprintConfig::default(),
            spec: ModelSpec::RandomForest {
                n_trees: 3,
                max_depth: 2,
                feature_subset: FeatureSubset::All,
            },
            seed: 0,
            base_score: 0.0,
            trees: vec![a, b, c],
            metrics: None,
            flat: OnceLock::new(),
        };
        // Row with bit 3 set, bit 7 clear: (1.0 + 0.5 + 0.75) / 3 = 0.75.
        let mut row = vec![0u64; 16];
        row[0] = 1 << 3;
        assert_eq!(model.predict_row(&row), 0.75);
        // Bit 7 set too: (1.0 + 0.5 + 0.25) / 3.
        row[0] |= 1 << 7;
        assert!((model.predict_row(&row) - 0.5833333333333334).abs() < 1e-15);
    }

    #[test]
    fn unanimous_and_split_votes() {
        let leaf = |v: f64| Tree {
            feature: vec![-1],
            threshold: vec![0.0],
            left: vec![-1],
            right: vec![-1],
            value: vec![v],
        };
        let all_ones = TreeEnsembleModel {
            format_version: 1,
            fingerprint_cfg: FingerprintConfig::default(),
            spec: ModelSpec::RandomForest {
                n_trees: 4,
                max_depth: 1,
                feature_subset: FeatureSubset::All,
            },
            seed: 0,
            base_score: 0.0,
            trees: vec![leaf(1.0), leaf(1.0), leaf(1.0), leaf(1.0)],
            metrics: None,
            flat: OnceLock::new(),
        };
        let mol = parse_smiles("CCO").unwrap();
        assert_eq!(all_ones.predict(&mol), 1.0);
        let half = TreeEnsembleModel {
            trees: vec![leaf(1.0), leaf(0.0), leaf(1.0), leaf(0.0)],
            flat: OnceLock::new(),
            ..all_ones
        };
        assert_eq!(half.predict(&mol), 0.5);
    }

    #[test]
    fn boosting_loss_never_increases() {
        let ds = nitrogen_dataset(200);
        let mols: Vec<Molecule> = ds.records.iter().map(|r| r.molecule.clone()).collect();
        let matrix = FeatureMatrix::from_molecules(&mols, &FingerprintConfig::default());
        let labels = ds.labels();
        let rows: Vec<usize> = (0..ds.len()).collect();
        let (_, diag) = train_on_matrix(
            &matrix,
            &labels,
            &rows,
            FingerprintConfig::default(),
            ModelSpec::GradientBoosting {
                rounds: 80,
                max_depth: 3,
                learning_rate: 0.1,
            },
            0,
        )
        .unwrap();
        assert_eq!(diag.boosting_loss.len(), 80);
        for w in diag.boosting_loss.windows(2) {
            assert!(w[1] <= w[0] + 1e-9, "loss increased: {} -> {}", w[0], w[1]);
        }
    }

    #[test]
    fn serialization_round_trip_preserves_predictions() {
        let ds = nitrogen_dataset(150);
        let model = train_model(
            &ds,
            FingerprintConfig::default(),
            ModelSpec::GradientBoosting {
                rounds: 40,
                max_depth: 3,
                learning_rate: 0.15,
            },
            11,
        )
        .unwrap();
        let restored = TreeEnsembleModel::from_json(&model.to_json()).unwrap();
        let probes = molgen::random_corpus(123, 100, &molgen::GenConfig::default());
        for mol in &probes {
            assert_eq!(model.predict(mol), restored.predict(mol));
        }
    }
}
