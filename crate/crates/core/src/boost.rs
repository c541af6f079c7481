//! AdaBoost over shallow decision trees.
//!
//! Each round fits a tree to the current example weights, scores it by its
//! weighted error `ε`, gives it the vote `θ = ½ ln((1 − ε) / ε)` and
//! re-weights every example by `exp(−θ · y · h(x))`. The ensemble predicts the
//! sign of `Σ θ_t h_t(x)`.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Binary class label, serialised as `-1` / `1`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Label {
    Negative,
    Positive,
}

impl Label {
    pub fn sign(self) -> f64 {
        match self {
            Label::Negative => -1.0,
            Label::Positive => 1.0,
        }
    }

    /// Sign of `x`, with zero mapped to `Positive`.
    pub fn from_margin(x: f64) -> Label {
        if x >= 0.0 {
            Label::Positive
        } else {
            Label::Negative
        }
    }

    pub fn as_i8(self) -> i8 {
        match self {
            Label::Negative => -1,
            Label::Positive => 1,
        }
    }

    pub fn from_i8(x: i8) -> Option<Label> {
        match x {
            -1 => Some(Label::Negative),
            1 => Some(Label::Positive),
            _ => None,
        }
    }
}

impl Serialize for Label {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        s.serialize_i8(self.as_i8())
    }
}

impl<'de> Deserialize<'de> for Label {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        let x = i8::deserialize(d)?;
        Label::from_i8(x)
            .ok_or_else(|| serde::de::Error::custom(format!("label {x} not in {{-1, 1}}")))
    }
}

/// Feature rows with their labels.
#[derive(Debug, Clone, PartialEq, Default)]
pub struct TrainingSet {
    pub features: Vec<Vec<f64>>,
    pub labels: Vec<Label>,
}

impl TrainingSet {
    pub fn new(features: Vec<Vec<f64>>, labels: Vec<Label>) -> Result<Self> {
        if features.len() != labels.len() {
            return Err(Error::DimensionMismatch {
                expected: features.len(),
                got: labels.len(),
            });
        }
        if let Some(first) = features.first() {
            let d = first.len();
            for row in &features {
                if row.len() != d {
                    return Err(Error::DimensionMismatch {
                        expected: d,
                        got: row.len(),
                    });
                }
                if row.iter().any(|x| !x.is_finite()) {
                    return Err(Error::InvalidArgument("non-finite feature value".into()));
                }
            }
        }
        Ok(TrainingSet { features, labels })
    }

    pub fn len(&self) -> usize {
        self.labels.len()
    }

    pub fn is_empty(&self) -> bool {
        self.labels.is_empty()
    }

    pub fn n_features(&self) -> usize {
        self.features.first().map_or(0, Vec::len)
    }

    pub fn subset(&self, idx: &[usize]) -> TrainingSet {
        TrainingSet {
            features: idx.iter().map(|&i| self.features[i].clone()).collect(),
            labels: idx.iter().map(|&i| self.labels[i]).collect(),
        }
    }

    fn has_both_labels(&self) -> bool {
        self.labels.contains(&Label::Positive) && self.labels.contains(&Label::Negative)
    }
}

/// Example weights; strictly positive and summing to one.
#[derive(Debug, Clone, PartialEq)]
pub struct WeightDistribution(Vec<f64>);

impl WeightDistribution {
    /// Normalises arbitrary positive finite weights.
    pub fn from_weights(raw: Vec<f64>) -> Result<Self> {
        if raw.is_empty() {
            return Err(Error::InvalidArgument("cannot weight zero examples".into()));
        }
        if raw.iter().any(|w| !(w.is_finite() && *w > 0.0)) {
            return Err(Error::InvalidArgument(
                "weights must be positive and finite".into(),
            ));
        }
        let z: f64 = raw.iter().sum();
        Ok(WeightDistribution(raw.into_iter().map(|w| w / z).collect()))
    }

    pub fn as_slice(&self) -> &[f64] {
        &self.0
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn sum(&self) -> f64 {
        self.0.iter().sum()
    }
}

/// Uniform `1/n` weights.
pub fn init_weights(n: usize) -> Result<WeightDistribution> {
    if n == 0 {
        return Err(Error::InvalidArgument("cannot weight zero examples".into()));
    }
    Ok(WeightDistribution(vec![1.0 / n as f64; n]))
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "node", rename_all = "lowercase")]
pub enum TreeNode {
    Leaf {
        label: Label,
    },
    /// Rows with `x[feature] <= threshold` go left.
    Split {
        feature: usize,
        threshold: f64,
        left: Box<TreeNode>,
        right: Box<TreeNode>,
    },
}

impl TreeNode {
    fn predict(&self, x: &[f64]) -> Label {
        let mut node = self;
        loop {
            match node {
                TreeNode::Leaf { label } => return *label,
                TreeNode::Split {
                    feature,
                    threshold,
                    left,
                    right,
                } => {
                    node = if x[*feature] <= *threshold {
                        left
                    } else {
                        right
                    };
                }
            }
        }
    }

    fn depth(&self) -> usize {
        match self {
            TreeNode::Leaf { .. } => 0,
            TreeNode::Split { left, right, .. } => 1 + left.depth().max(right.depth()),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct DecisionTree {
    pub root: TreeNode,
}

impl DecisionTree {
    pub fn leaf(label: Label) -> Self {
        DecisionTree {
            root: TreeNode::Leaf { label },
        }
    }

    /// Panics if `x` is shorter than a feature index used by the tree.
    pub fn predict(&self, x: &[f64]) -> Label {
        self.root.predict(x)
    }

    pub fn depth(&self) -> usize {
        self.root.depth()
    }
}

#[derive(Clone, Copy, Default)]
struct Mass {
    pos: f64,
    neg: f64,
}

impl Mass {
    fn total(self) -> f64 {
        self.pos + self.neg
    }

    fn gini(self) -> f64 {
        let w = self.total();
        if w <= 0.0 {
            return 0.0;
        }
        let (p, q) = (self.pos / w, self.neg / w);
        w * (1.0 - p * p - q * q)
    }

    /// Weight misclassified by a leaf voting the weighted majority.
    fn leaf_error(self) -> f64 {
        self.pos.min(self.neg)
    }

    fn majority(self) -> Label {
        if self.pos >= self.neg {
            Label::Positive
        } else {
            Label::Negative
        }
    }

    fn add(&mut self, label: Label, w: f64) {
        match label {
            Label::Positive => self.pos += w,
            Label::Negative => self.neg += w,
        }
    }
}

struct Candidate {
    feature: usize,
    threshold: f64,
    key: (f64, f64),
}

fn midpoint(a: f64, b: f64) -> f64 {
    let m = a * 0.5 + b * 0.5;
    if m >= b {
        a
    } else {
        m
    }
}

/// Weighted decision-tree learner.
///
/// Splits whose children are leaves minimise weighted misclassification (ties
/// by weighted Gini); splits higher up minimise weighted Gini. Candidate
/// thresholds are midpoints between consecutive distinct feature values and
/// ties keep the lowest `(feature, threshold)`.
pub fn train_weak(
    set: &TrainingSet,
    weights: &WeightDistribution,
    max_depth: usize,
) -> Result<DecisionTree> {
    if set.is_empty() {
        return Err(Error::InvalidArgument(
            "cannot train on an empty example set".into(),
        ));
    }
    if weights.len() != set.len() {
        return Err(Error::DimensionMismatch {
            expected: set.len(),
            got: weights.len(),
        });
    }
    let idx: Vec<usize> = (0..set.len()).collect();
    Ok(DecisionTree {
        root: grow(set, weights.as_slice(), idx, max_depth),
    })
}

fn grow(set: &TrainingSet, w: &[f64], idx: Vec<usize>, depth_left: usize) -> TreeNode {
    let mut mass = Mass::default();
    for &i in &idx {
        mass.add(set.labels[i], w[i]);
    }
    let leaf = TreeNode::Leaf {
        label: mass.majority(),
    };
    if depth_left == 0 || mass.pos == 0.0 || mass.neg == 0.0 {
        return leaf;
    }
    let last_level = depth_left == 1;

    let mut best: Option<Candidate> = None;
    let mut order = idx.clone();
    for feature in 0..set.n_features() {
        order.sort_by(|&a, &b| set.features[a][feature].total_cmp(&set.features[b][feature]));
        let mut left = Mass::default();
        for pos in 0..order.len() - 1 {
            let i = order[pos];
            left.add(set.labels[i], w[i]);
            let (a, b) = (
                set.features[i][feature],
                set.features[order[pos + 1]][feature],
            );
            if a == b {
                continue;
            }
            let right = Mass {
                pos: mass.pos - left.pos,
                neg: mass.neg - left.neg,
            };
            let gini = left.gini() + right.gini();
            let key = if last_level {
                (left.leaf_error() + right.leaf_error(), gini)
            } else {
                (gini, left.leaf_error() + right.leaf_error())
            };
            if best.as_ref().is_none_or(|c| key < c.key) {
                best = Some(Candidate {
                    feature,
                    threshold: midpoint(a, b),
                    key,
                });
            }
        }
    }

    let Some(split) = best else { return leaf };
    if last_level && split.key.0 >= mass.leaf_error() {
        return leaf;
    }
    let (l, r): (Vec<usize>, Vec<usize>) = idx
        .into_iter()
        .partition(|&i| set.features[i][split.feature] <= split.threshold);
    TreeNode::Split {
        feature: split.feature,
        threshold: split.threshold,
        left: Box::new(grow(set, w, l, depth_left - 1)),
        right: Box::new(grow(set, w, r, depth_left - 1)),
    }
}

/// Total weight of the examples `tree` misclassifies.
pub fn weighted_error(
    tree: &DecisionTree,
    set: &TrainingSet,
    weights: &WeightDistribution,
) -> Result<f64> {
    if weights.len() != set.len() {
        return Err(Error::DimensionMismatch {
            expected: set.len(),
            got: weights.len(),
        });
    }
    Ok(set
        .features
        .iter()
        .zip(&set.labels)
        .zip(weights.as_slice())
        .filter(|((x, y), _)| tree.predict(x) != **y)
        .map(|(_, w)| w)
        .sum())
}

/// `½ ln((1 − ε) / ε)` for `0 < ε < ½`.
pub fn learner_weight(epsilon: f64) -> Result<f64> {
    if !(epsilon > 0.0 && epsilon < 0.5) {
        return Err(Error::Training(format!(
            "weighted error {epsilon} outside (0, 0.5)"
        )));
    }
    Ok(0.5 * ((1.0 - epsilon) / epsilon).ln())
}

/// Multiplies each weight by `exp(−θ · y · h)` and renormalises.
pub fn update_weights(
    d: &WeightDistribution,
    theta: f64,
    predictions: &[Label],
    labels: &[Label],
) -> Result<WeightDistribution> {
    if predictions.len() != d.len() || labels.len() != d.len() {
        return Err(Error::DimensionMismatch {
            expected: d.len(),
            got: predictions.len().min(labels.len()),
        });
    }
    if !theta.is_finite() {
        return Err(Error::Training(format!(
            "learner weight {theta} is not finite"
        )));
    }
    let exponents: Vec<f64> = predictions
        .iter()
        .zip(labels)
        .map(|(h, y)| -theta * y.sign() * h.sign())
        .collect();
    let peak = exponents.iter().fold(0.0f64, |m, e| m.max(e.abs()));

    let mut next: Vec<f64> = if peak > 30.0 {
        let logs: Vec<f64> =
            d.0.iter()
                .zip(&exponents)
                .map(|(w, e)| w.ln() + e)
                .collect();
        let top = logs.iter().copied().fold(f64::NEG_INFINITY, f64::max);
        logs.iter().map(|l| (l - top).exp()).collect()
    } else {
        d.0.iter()
            .zip(&exponents)
            .map(|(w, e)| w * e.exp())
            .collect()
    };
    let z: f64 = next.iter().sum();
    if !z.is_finite() || z <= 0.0 {
        return Err(Error::Training(format!(
            "weight normaliser {z} is degenerate"
        )));
    }
    for w in &mut next {
        *w /= z;
        if !(w.is_finite() && *w > 0.0) {
            return Err(Error::Training("weight underflow during update".into()));
        }
    }
    Ok(WeightDistribution(next))
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct BoostConfig {
    pub rounds: usize,
    pub max_depth: usize,
    pub seed: u64,
}

impl Default for BoostConfig {
    fn default() -> Self {
        BoostConfig {
            rounds: 50,
            max_depth: 2,
            seed: 0,
        }
    }
}

pub const EPSILON_FLOOR: f64 = 1e-10;
/// Errors this close to ½ count as chance (reweighting rounding can leave
/// an exact ½ a few ulps short).
pub const CHANCE_MARGIN: f64 = 1e-12;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Round {
    pub tree: DecisionTree,
    pub theta: f64,
    /// Clamped weighted training error of this round's tree.
    pub epsilon: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct BoostModel {
    pub config: BoostConfig,
    pub n_features: usize,
    /// Names of the input columns, when known.
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub feature_names: Vec<String>,
    pub rounds: Vec<Round>,
}

/// Per-round weight distributions seen during [`fit_traced`]; entry `t` is
/// the distribution the `t`-th tree was trained on.
#[derive(Debug, Clone, Default)]
pub struct FitTrace {
    pub weights: Vec<WeightDistribution>,
}

pub fn fit(set: &TrainingSet, cfg: &BoostConfig) -> Result<BoostModel> {
    fit_traced(set, cfg).map(|(m, _)| m)
}

/// Trains an ensemble of at most `cfg.rounds` trees.
///
/// Training stops early when a tree is no better than chance (that round is
/// dropped) or when a tree is perfect (that round is kept). A model can
/// therefore hold no rounds at all, in which case it predicts `Positive`.
pub fn fit_traced(set: &TrainingSet, cfg: &BoostConfig) -> Result<(BoostModel, FitTrace)> {
    if set.len() < 2 || !set.has_both_labels() {
        return Err(Error::Training(
            "need at least two examples covering both labels".into(),
        ));
    }
    let mut weights = init_weights(set.len())?;
    let mut trace = FitTrace::default();
    let mut rounds = Vec::new();

    for _ in 0..cfg.rounds {
        trace.weights.push(weights.clone());
        let tree = train_weak(set, &weights, cfg.max_depth)?;
        let raw = weighted_error(&tree, set, &weights)?;
        let epsilon = raw.clamp(EPSILON_FLOOR, 1.0 - EPSILON_FLOOR);
        if epsilon >= 0.5 - CHANCE_MARGIN {
            break;
        }
        let theta = learner_weight(epsilon)?;
        let predictions: Vec<Label> = set.features.iter().map(|x| tree.predict(x)).collect();
        rounds.push(Round {
            tree,
            theta,
            epsilon,
        });
        if raw <= EPSILON_FLOOR {
            break;
        }
        weights = update_weights(&weights, theta, &predictions, &set.labels)?;
    }

    Ok((
        BoostModel {
            config: *cfg,
            n_features: set.n_features(),
            feature_names: Vec::new(),
            rounds,
        },
        trace,
    ))
}

impl BoostModel {
    /// `(sign(margin), margin)` with `margin = Σ θ_t h_t(x)`; a zero margin is `Positive`.
    pub fn predict(&self, x: &[f64]) -> Result<(Label, f64)> {
        if x.len() != self.n_features {
            return Err(Error::DimensionMismatch {
                expected: self.n_features,
                got: x.len(),
            });
        }
        let margin: f64 = self
            .rounds
            .iter()
            .map(|r| r.theta * r.tree.predict(x).sign())
            .sum();
        Ok((Label::from_margin(margin), margin))
    }

    pub fn to_json(&self) -> Result<String> {
        Ok(serde_json::to_string_pretty(self)?)
    }

    pub fn from_json(s: &str) -> Result<Self> {
        Ok(serde_json::from_str(s)?)
    }
}

/// Convenience wrapper around [`BoostModel::predict`].
pub fn predict(model: &BoostModel, x: &[f64]) -> Result<(Label, f64)> {
    model.predict(x)
}

#[cfg(test)]
mod tests {
    use super::*;
    use Label::{Negative as N, Positive as P};

    fn set(rows: &[(&[f64], Label)]) -> TrainingSet {
        TrainingSet::new(
            rows.iter().map(|(x, _)| x.to_vec()).collect(),
            rows.iter().map(|(_, y)| *y).collect(),
        )
        .unwrap()
    }

    fn xor() -> TrainingSet {
        set(&[
            (&[0.0, 0.0], N),
            (&[0.0, 1.0], P),
            (&[1.0, 0.0], P),
            (&[1.0, 1.0], N),
        ])
    }

    #[test]
    fn uniform_weights() {
        assert_eq!(init_weights(4).unwrap().as_slice(), &[0.25; 4]);
        assert_eq!(init_weights(1).unwrap().as_slice(), &[1.0]);
        assert!(init_weights(0).is_err());
        assert!((init_weights(7).unwrap().sum() - 1.0).abs() < 1e-12);
    }

    #[test]
    fn separable_stump() {
        let s = set(&[(&[0.0], N), (&[0.2], N), (&[0.8], P), (&[1.0], P)]);
        let w = init_weights(4).unwrap();
        let t = train_weak(&s, &w, 1).unwrap();
        match &t.root {
            TreeNode::Split {
                feature, threshold, ..
            } => {
                assert_eq!(*feature, 0);
                assert_eq!(*threshold, 0.5);
            }
            other => panic!("expected a split, got {other:?}"),
        }
        assert_eq!(weighted_error(&t, &s, &w).unwrap(), 0.0);
    }

    #[test]
    fn pure_labels_make_a_leaf() {
        let s = set(&[(&[0.0], N), (&[3.0], N)]);
        let t = train_weak(&s, &init_weights(2).unwrap(), 3).unwrap();
        assert_eq!(t, DecisionTree::leaf(N));
        assert!(train_weak(&TrainingSet::default(), &init_weights(1).unwrap(), 1).is_err());
    }

    #[test]
    fn error_of_inverted_and_partial_trees() {
        let s = set(&[(&[0.0], N), (&[1.0], P), (&[2.0], P)]);
        let w = init_weights(3).unwrap();
        let inverted = DecisionTree {
            root: TreeNode::Split {
                feature: 0,
                threshold: 0.5,
                left: Box::new(TreeNode::Leaf { label: P }),
                right: Box::new(TreeNode::Leaf { label: N }),
            },
        };
        assert_eq!(weighted_error(&inverted, &s, &w).unwrap(), 1.0);
        let all_pos = DecisionTree::leaf(P);
        assert!((weighted_error(&all_pos, &s, &w).unwrap() - 1.0 / 3.0).abs() < 1e-15);
    }

    #[test]
    fn learner_weight_values() {
        assert!((learner_weight(0.25).unwrap() - 0.549_306_144_334_054_8).abs() < 1e-12);
        assert!((learner_weight(0.1).unwrap() - 1.098_612_288_668_109_6).abs() < 1e-12);
        assert!(learner_weight(0.5 - 1e-12).unwrap() < 1e-11);
        for bad in [0.0, 0.5, 0.7, -0.1, f64::NAN] {
            assert!(learner_weight(bad).is_err());
        }
    }

    #[test]
    fn update_weights_cases() {
        let d = init_weights(2).unwrap();
        let theta = 0.5 * 3f64.ln();
        let next = update_weights(&d, theta, &[P, P], &[P, N]).unwrap();
        assert!((next.as_slice()[0] - 0.25).abs() < 1e-15);
        assert!((next.as_slice()[1] - 0.75).abs() < 1e-15);

        let same = update_weights(&d, 2.0, &[P, N], &[P, N]).unwrap();
        assert_eq!(same.as_slice(), d.as_slice());

        assert!(update_weights(&d, f64::INFINITY, &[P, P], &[P, N]).is_err());
        assert!(update_weights(&d, 1.0, &[P], &[P, N]).is_err());
    }

    #[test]
    fn update_weights_log_space_path() {
        let d = init_weights(3).unwrap();
        let next = update_weights(&d, 40.0, &[P, P, N], &[P, N, N]).unwrap();
        assert!((next.sum() - 1.0).abs() < 1e-12);
        assert!(next.as_slice()[1] > 0.99);
    }

    #[test]
    fn separable_fit_stops_after_one_round() {
        let s = set(&[(&[0.0], N), (&[1.0], N), (&[2.0], P), (&[3.0], P)]);
        let m = fit(
            &s,
            &BoostConfig {
                rounds: 5,
                max_depth: 1,
                seed: 0,
            },
        )
        .unwrap();
        assert_eq!(m.rounds.len(), 1);
        for (x, y) in s.features.iter().zip(&s.labels) {
            assert_eq!(m.predict(x).unwrap().0, *y);
        }
    }

    #[test]
    fn xor_needs_depth_two() {
        let s = xor();
        let m = fit(
            &s,
            &BoostConfig {
                rounds: 20,
                max_depth: 2,
                seed: 0,
            },
        )
        .unwrap();
        for (x, y) in s.features.iter().zip(&s.labels) {
            assert_eq!(m.predict(x).unwrap().0, *y);
        }
    }

    #[test]
    fn single_class_is_rejected() {
        let s = set(&[(&[0.0], P), (&[1.0], P)]);
        assert!(fit(&s, &BoostConfig::default()).is_err());
    }

    #[test]
    fn predict_arithmetic() {
        let m = BoostModel {
            config: BoostConfig::default(),
            n_features: 1,
            feature_names: Vec::new(),
            rounds: vec![
                Round {
                    tree: DecisionTree::leaf(P),
                    theta: 0.6,
                    epsilon: 0.2,
                },
                Round {
                    tree: DecisionTree::leaf(N),
                    theta: 0.4,
                    epsilon: 0.3,
                },
            ],
        };
        let (label, margin) = m.predict(&[0.0]).unwrap();
        assert_eq!(label, P);
        assert!((margin - 0.2).abs() < 1e-15);
        assert!(m.predict(&[0.0, 1.0]).is_err());

        let one = BoostModel {
            rounds: vec![Round {
                tree: DecisionTree::leaf(P),
                theta: 1.0,
                epsilon: 0.1,
            }],
            ..m.clone()
        };
        assert_eq!(one.predict(&[5.0]).unwrap(), (P, 1.0));

        let empty = BoostModel {
            rounds: vec![],
            ..m
        };
        assert_eq!(empty.predict(&[5.0]).unwrap(), (P, 0.0));
    }

    #[test]
    fn model_json_round_trip() {
        let s = set(&[
            (&[0.1, 3.3], N),
            (&[0.7, 1.0 / 3.0], P),
            (&[0.35, 2.0], P),
            (&[0.9, 0.0], N),
            (&[0.2, 0.5], P),
        ]);
        let m = fit(
            &s,
            &BoostConfig {
                rounds: 10,
                max_depth: 2,
                seed: 3,
            },
        )
        .unwrap();
        let back = BoostModel::from_json(&m.to_json().unwrap()).unwrap();
        assert_eq!(back, m);
    }

    #[test]
    fn label_serde() {
        assert_eq!(serde_json::to_string(&N).unwrap(), "-1");
        assert_eq!(serde_json::from_str::<Label>("1").unwrap(), P);
        assert!(serde_json::from_str::<Label>("0").is_err());
    }
}
