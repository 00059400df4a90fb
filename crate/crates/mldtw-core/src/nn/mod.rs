//! Minimal feed-forward classifier stack: standardization, dense layers,
//! ReLU, softmax, cross-entropy training with Adam and early stopping.

pub(crate) mod io;

pub use io::{load_model, model_from_bytes, model_to_bytes, save_model};

use rand::{Rng, SeedableRng};

use crate::error::{Error, Result};
use crate::region::Waypoint;

const ADAM_BETA1: f64 = 0.9;
const ADAM_BETA2: f64 = 0.999;
const ADAM_EPSILON: f64 = 1e-8;

/// Elementwise `max(0, x)`.
#[must_use]
pub fn relu(v: &[f64]) -> Vec<f64> {
    v.iter().map(|&x| x.max(0.0)).collect()
}

/// Normalize logits to a probability distribution.
///
/// Computed with max-subtraction, so it is shift-invariant and does not
/// overflow for logits of any magnitude.
#[must_use]
pub fn softmax(z: &[f64]) -> Vec<f64> {
    let max = z.iter().copied().fold(f64::NEG_INFINITY, f64::max);
    let mut out: Vec<f64> = z.iter().map(|&x| (x - max).exp()).collect();
    let sum: f64 = out.iter().sum();
    for p in &mut out {
        *p /= sum;
    }
    out
}

/// Per-feature standardization fitted on a training set.
#[derive(Debug, Clone, PartialEq)]
pub struct Scaler {
    means: Vec<f64>,
    stds: Vec<f64>,
}

impl Scaler {
    /// Fit per-feature mean and standard deviation. Zero-variance features
    /// get a standard deviation of 1 so transforming them yields zeros.
    pub fn fit(rows: &[Vec<f64>]) -> Result<Self> {
        if rows.len() < 2 {
            return Err(Error::InvalidParameter {
                name: "rows",
                reason: format!("need at least 2 rows to fit a scaler, got {}", rows.len()),
            });
        }
        let dim = rows[0].len();
        let count = rows.len() as f64;
        let mut means = vec![0.0; dim];
        for row in rows {
            for (mean, &x) in means.iter_mut().zip(row) {
                *mean += x;
            }
        }
        for mean in &mut means {
            *mean /= count;
        }
        let mut stds = vec![0.0; dim];
        for row in rows {
            for ((std, &mean), &x) in stds.iter_mut().zip(&means).zip(row) {
                *std += (x - mean) * (x - mean);
            }
        }
        for std in &mut stds {
            *std = (*std / count).sqrt();
            if *std == 0.0 {
                *std = 1.0;
            }
        }
        Ok(Self { means, stds })
    }

    pub(crate) fn from_parts(means: Vec<f64>, stds: Vec<f64>) -> Self {
        Self { means, stds }
    }

    /// Number of features the scaler was fitted on.
    #[must_use]
    pub fn dim(&self) -> usize {
        self.means.len()
    }

    /// Per-feature means.
    #[must_use]
    pub fn means(&self) -> &[f64] {
        &self.means
    }

    /// Per-feature standard deviations (always positive).
    #[must_use]
    pub fn stds(&self) -> &[f64] {
        &self.stds
    }

    /// Standardize one feature vector.
    pub fn transform(&self, x: &[f64]) -> Result<Vec<f64>> {
        if x.len() != self.means.len() {
            return Err(Error::FeatureLengthMismatch {
                got: x.len(),
                expected: self.means.len(),
            });
        }
        Ok(x.iter()
            .zip(self.means.iter().zip(&self.stds))
            .map(|(&v, (&mean, &std))| (v - mean) / std)
            .collect())
    }
}

/// Layer activation.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Activation {
    Relu,
    Softmax,
}

#[derive(Debug, Clone, PartialEq)]
pub(crate) struct Layer {
    in_dim: usize,
    out_dim: usize,
    /// `in_dim x out_dim`, row-major: `weights[i * out_dim + j]` connects
    /// input `i` to output `j`.
    weights: Vec<f64>,
    biases: Vec<f64>,
    activation: Activation,
}

impl Layer {
    fn he_uniform(
        in_dim: usize,
        out_dim: usize,
        activation: Activation,
        rng: &mut impl Rng,
    ) -> Self {
        let limit = (6.0 / in_dim as f64).sqrt();
        let weights = (0..in_dim * out_dim)
            .map(|_| rng.random_range(-limit..limit))
            .collect();
        Self {
            in_dim,
            out_dim,
            weights,
            biases: vec![0.0; out_dim],
            activation,
        }
    }

    /// `z = W'x + b` without the activation.
    fn affine(&self, x: &[f64]) -> Vec<f64> {
        let mut z = self.biases.clone();
        for (i, &xi) in x.iter().enumerate() {
            let row = &self.weights[i * self.out_dim..(i + 1) * self.out_dim];
            for (zj, &w) in z.iter_mut().zip(row) {
                *zj += xi * w;
            }
        }
        z
    }

    fn activate(&self, mut z: Vec<f64>) -> Vec<f64> {
        match self.activation {
            Activation::Relu => {
                for v in &mut z {
                    *v = v.max(0.0);
                }
                z
            }
            Activation::Softmax => {
                let max = z.iter().copied().fold(f64::NEG_INFINITY, f64::max);
                let mut sum = 0.0;
                for v in &mut z {
                    *v = (*v - max).exp();
                    sum += *v;
                }
                for v in &mut z {
                    *v /= sum;
                }
                z
            }
        }
    }
}

/// A trained classifier: dense layers ending in softmax, plus the map from
/// output index to waypoint label.
#[derive(Debug, Clone, PartialEq)]
pub struct DenseNet {
    layers: Vec<Layer>,
    label_map: Vec<Waypoint>,
}

impl DenseNet {
    /// A freshly initialized two-layer net (`feature_dim -> hidden` ReLU,
    /// `hidden -> labels` softmax) with seeded He-uniform weights.
    #[must_use]
    pub fn new_seeded(
        feature_dim: usize,
        hidden_width: usize,
        label_map: Vec<Waypoint>,
        seed: u64,
    ) -> Self {
        let mut rng = rand::rngs::StdRng::seed_from_u64(seed);
        let layers = vec![
            Layer::he_uniform(feature_dim, hidden_width, Activation::Relu, &mut rng),
            Layer::he_uniform(hidden_width, label_map.len(), Activation::Softmax, &mut rng),
        ];
        Self { layers, label_map }
    }

    pub(crate) fn from_parts(layers: Vec<Layer>, label_map: Vec<Waypoint>) -> Self {
        Self { layers, label_map }
    }

    pub(crate) fn layers(&self) -> &[Layer] {
        &self.layers
    }

    /// Output index to waypoint label.
    #[must_use]
    pub fn label_map(&self) -> &[Waypoint] {
        &self.label_map
    }

    /// Input width of the first layer.
    #[must_use]
    pub fn feature_dim(&self) -> usize {
        self.layers[0].in_dim
    }

    /// Class probabilities for an already-scaled feature vector.
    #[must_use]
    pub fn forward(&self, x: &[f64]) -> Vec<f64> {
        let mut a = x.to_vec();
        for layer in &self.layers {
            a = layer.activate(layer.affine(&a));
        }
        a
    }

    /// Cross-entropy of the target class for one scaled input.
    #[must_use]
    pub fn loss(&self, x: &[f64], target: usize) -> f64 {
        -self.forward(x)[target].max(1e-15).ln()
    }

    /// All parameters flattened in layer order (weights row-major, then
    /// biases), for gradient checking.
    #[must_use]
    pub fn flat_params(&self) -> Vec<f64> {
        let mut out = Vec::new();
        for layer in &self.layers {
            out.extend_from_slice(&layer.weights);
            out.extend_from_slice(&layer.biases);
        }
        out
    }

    /// Replace all parameters from a flat vector laid out as
    /// [`flat_params`](Self::flat_params).
    pub fn set_flat_params(&mut self, params: &[f64]) {
        let mut pos = 0;
        for layer in &mut self.layers {
            let w_len = layer.weights.len();
            layer.weights.copy_from_slice(&params[pos..pos + w_len]);
            pos += w_len;
            let b_len = layer.biases.len();
            layer.biases.copy_from_slice(&params[pos..pos + b_len]);
            pos += b_len;
        }
        assert_eq!(pos, params.len(), "parameter count mismatch");
    }

    /// Analytic gradient of [`loss`](Self::loss) with respect to every
    /// parameter, in [`flat_params`](Self::flat_params) order.
    #[must_use]
    pub fn loss_gradient(&self, x: &[f64], target: usize) -> Vec<f64> {
        let mut grads = Gradients::zeros(&self.layers);
        let activations = self.forward_all(x);
        self.backprop(x, &activations, target, 1.0, &mut grads);
        grads.flatten()
    }

    /// Activations after every layer.
    fn forward_all(&self, x: &[f64]) -> Vec<Vec<f64>> {
        let mut acts: Vec<Vec<f64>> = Vec::with_capacity(self.layers.len());
        for (l, layer) in self.layers.iter().enumerate() {
            let input: &[f64] = if l == 0 { x } else { &acts[l - 1] };
            let a = layer.activate(layer.affine(input));
            acts.push(a);
        }
        acts
    }

    /// Accumulate gradients of `scale * cross_entropy(x, target)`.
    ///
    /// Uses `dL/dz = softmax(z) - onehot` at the output and masks ReLU
    /// layers by their (post-activation) positivity.
    fn backprop(
        &self,
        x: &[f64],
        activations: &[Vec<f64>],
        target: usize,
        scale: f64,
        grads: &mut Gradients,
    ) {
        let out = activations.last().expect("at least one layer");
        let mut delta: Vec<f64> = out.iter().map(|&p| p * scale).collect();
        delta[target] -= scale;

        for l in (0..self.layers.len()).rev() {
            let layer = &self.layers[l];
            let input: &[f64] = if l == 0 { x } else { &activations[l - 1] };
            let g = &mut grads.per_layer[l];
            for (i, &xi) in input.iter().enumerate() {
                let row = &mut g.weights[i * layer.out_dim..(i + 1) * layer.out_dim];
                for (gw, &d) in row.iter_mut().zip(&delta) {
                    *gw += xi * d;
                }
            }
            for (gb, &d) in g.biases.iter_mut().zip(&delta) {
                *gb += d;
            }
            if l > 0 {
                let mut prev = vec![0.0; layer.in_dim];
                for (i, p) in prev.iter_mut().enumerate() {
                    let row = &layer.weights[i * layer.out_dim..(i + 1) * layer.out_dim];
                    *p = row.iter().zip(&delta).map(|(&w, &d)| w * d).sum();
                }
                // ReLU mask: gradient passes only where the activation fired.
                for (p, &a) in prev.iter_mut().zip(&activations[l - 1]) {
                    if a <= 0.0 {
                        *p = 0.0;
                    }
                }
                delta = prev;
            }
        }
    }
}

struct LayerGrads {
    weights: Vec<f64>,
    biases: Vec<f64>,
}

struct Gradients {
    per_layer: Vec<LayerGrads>,
}

impl Gradients {
    fn zeros(layers: &[Layer]) -> Self {
        Self {
            per_layer: layers
                .iter()
                .map(|l| LayerGrads {
                    weights: vec![0.0; l.weights.len()],
                    biases: vec![0.0; l.biases.len()],
                })
                .collect(),
        }
    }

    fn reset(&mut self) {
        for g in &mut self.per_layer {
            g.weights.fill(0.0);
            g.biases.fill(0.0);
        }
    }

    fn flatten(&self) -> Vec<f64> {
        let mut out = Vec::new();
        for g in &self.per_layer {
            out.extend_from_slice(&g.weights);
            out.extend_from_slice(&g.biases);
        }
        out
    }
}

struct AdamState {
    m_w: Vec<f64>,
    v_w: Vec<f64>,
    m_b: Vec<f64>,
    v_b: Vec<f64>,
    step: u32,
}

impl AdamState {
    fn new(layer: &Layer) -> Self {
        Self {
            m_w: vec![0.0; layer.weights.len()],
            v_w: vec![0.0; layer.weights.len()],
            m_b: vec![0.0; layer.biases.len()],
            v_b: vec![0.0; layer.biases.len()],
            step: 0,
        }
    }

    fn update(&mut self, layer: &mut Layer, grads: &LayerGrads, lr: f64) {
        self.step += 1;
        let bias1 = 1.0 - ADAM_BETA1.powi(self.step as i32);
        let bias2 = 1.0 - ADAM_BETA2.powi(self.step as i32);
        adam_step(
            &mut layer.weights,
            &grads.weights,
            &mut self.m_w,
            &mut self.v_w,
            lr,
            bias1,
            bias2,
        );
        adam_step(
            &mut layer.biases,
            &grads.biases,
            &mut self.m_b,
            &mut self.v_b,
            lr,
            bias1,
            bias2,
        );
    }
}

fn adam_step(
    params: &mut [f64],
    grads: &[f64],
    m: &mut [f64],
    v: &mut [f64],
    lr: f64,
    bias1: f64,
    bias2: f64,
) {
    for (((p, &g), m), v) in params
        .iter_mut()
        .zip(grads)
        .zip(m.iter_mut())
        .zip(v.iter_mut())
    {
        *m = ADAM_BETA1 * *m + (1.0 - ADAM_BETA1) * g;
        *v = ADAM_BETA2 * *v + (1.0 - ADAM_BETA2) * g * g;
        let m_hat = *m / bias1;
        let v_hat = *v / bias2;
        *p -= lr * m_hat / (v_hat.sqrt() + ADAM_EPSILON);
    }
}

/// Training hyperparameters.
#[derive(Debug, Clone)]
pub struct TrainConfig {
    pub max_epochs: usize,
    pub patience: usize,
    pub batch_size: usize,
    pub learning_rate: f64,
    pub validation_fraction: f64,
    pub hidden_width: usize,
    pub seed: u64,
}

impl TrainConfig {
    /// Defaults: 200 epochs, patience 10, batch 32, learning rate 1e-3,
    /// 80/20 split, hidden width 300.
    #[must_use]
    pub fn with_seed(seed: u64) -> Self {
        Self {
            max_epochs: 200,
            patience: 10,
            batch_size: 32,
            learning_rate: 1e-3,
            validation_fraction: 0.2,
            hidden_width: 300,
            seed,
        }
    }

    fn validate(&self) -> Result<()> {
        let check = |ok: bool, name: &'static str, reason: &str| {
            if ok {
                Ok(())
            } else {
                Err(Error::InvalidParameter {
                    name,
                    reason: reason.into(),
                })
            }
        };
        check(self.max_epochs >= 1, "max_epochs", "must be positive")?;
        check(self.patience >= 1, "patience", "must be positive")?;
        check(self.batch_size >= 1, "batch_size", "must be positive")?;
        check(
            self.learning_rate > 0.0,
            "learning_rate",
            "must be positive",
        )?;
        check(
            self.validation_fraction > 0.0 && self.validation_fraction <= 0.5,
            "validation_fraction",
            "must lie in (0, 0.5]",
        )?;
        check(self.hidden_width >= 1, "hidden_width", "must be positive")?;
        Ok(())
    }
}

/// Per-epoch loss and accuracy on the train and validation splits.
#[derive(Debug, Clone, Copy)]
pub struct EpochStats {
    pub epoch: usize,
    pub train_loss: f64,
    pub train_accuracy: f64,
    pub val_loss: f64,
    pub val_accuracy: f64,
}

/// Full training record, including which epoch's weights were kept.
#[derive(Debug, Clone)]
pub struct TrainHistory {
    pub epochs: Vec<EpochStats>,
    pub best_epoch: usize,
}

/// Train a softmax classifier on label indices `0..label_map.len()`.
///
/// Splits off a seeded validation fraction, standardizes features with a
/// scaler fitted on the training split, minimizes categorical cross-entropy
/// with Adam, and stops once validation loss has not improved for
/// `patience` consecutive epochs. The returned network carries the weights
/// of the best-validation epoch. Fully deterministic for a fixed seed.
pub fn train_classifier(
    features: &[Vec<f64>],
    labels: &[usize],
    label_map: Vec<Waypoint>,
    cfg: &TrainConfig,
) -> Result<(DenseNet, Scaler, TrainHistory)> {
    cfg.validate()?;
    if features.len() != labels.len() {
        return Err(Error::InvalidParameter {
            name: "labels",
            reason: format!("{} rows but {} labels", features.len(), labels.len()),
        });
    }
    if features.len() < 2 {
        return Err(Error::InvalidParameter {
            name: "features",
            reason: "need at least 2 rows".into(),
        });
    }
    let class_count = label_map.len();
    {
        let mut seen = vec![false; class_count];
        for (row, &y) in labels.iter().enumerate() {
            if y >= class_count {
                return Err(Error::InvalidParameter {
                    name: "labels",
                    reason: format!("row {row}: label index {y} >= {class_count}"),
                });
            }
            seen[y] = true;
        }
        if seen.iter().filter(|&&s| s).count() < 2 {
            return Err(Error::InvalidParameter {
                name: "labels",
                reason: "fewer than 2 distinct labels".into(),
            });
        }
    }
    let feature_dim = features[0].len();
    for (row, f) in features.iter().enumerate() {
        if f.len() != feature_dim {
            return Err(Error::FeatureLengthMismatch {
                got: f.len(),
                expected: feature_dim,
            });
        }
        if f.iter().any(|v| !v.is_finite()) {
            return Err(Error::NonFiniteFeature { row });
        }
    }

    let mut rng = rand::rngs::StdRng::seed_from_u64(cfg.seed);

    // Seeded 80/20-style split.
    let mut indices: Vec<usize> = (0..features.len()).collect();
    shuffle(&mut indices, &mut rng);
    let val_count = ((features.len() as f64 * cfg.validation_fraction).round() as usize)
        .clamp(1, features.len() - 1);
    let (val_idx, train_idx) = indices.split_at(val_count);

    let train_rows: Vec<Vec<f64>> = train_idx.iter().map(|&i| features[i].clone()).collect();
    let scaler = Scaler::fit(&train_rows)?;
    let train_x: Vec<Vec<f64>> = train_rows
        .iter()
        .map(|r| scaler.transform(r).expect("dims checked"))
        .collect();
    let train_y: Vec<usize> = train_idx.iter().map(|&i| labels[i]).collect();
    let val_x: Vec<Vec<f64>> = val_idx
        .iter()
        .map(|&i| scaler.transform(&features[i]).expect("dims checked"))
        .collect();
    let val_y: Vec<usize> = val_idx.iter().map(|&i| labels[i]).collect();

    let mut net = DenseNet::new_seeded(
        feature_dim,
        cfg.hidden_width,
        label_map,
        rng.random::<u64>(),
    );
    let mut adam: Vec<AdamState> = net.layers.iter().map(AdamState::new).collect();
    let mut grads = Gradients::zeros(&net.layers);

    let mut order: Vec<usize> = (0..train_x.len()).collect();
    let mut best_val = f64::INFINITY;
    let mut best_epoch = 0;
    let mut best_params = net.flat_params();
    let mut stale_epochs = 0;
    let mut history = Vec::new();

    for epoch in 1..=cfg.max_epochs {
        shuffle(&mut order, &mut rng);
        for batch in order.chunks(cfg.batch_size) {
            grads.reset();
            let scale = 1.0 / batch.len() as f64;
            for &i in batch {
                let activations = net.forward_all(&train_x[i]);
                net.backprop(&train_x[i], &activations, train_y[i], scale, &mut grads);
            }
            for (layer, (state, g)) in net
                .layers
                .iter_mut()
                .zip(adam.iter_mut().zip(&grads.per_layer))
            {
                state.update(layer, g, cfg.learning_rate);
            }
        }

        let (train_loss, train_accuracy) = evaluate(&net, &train_x, &train_y);
        let (val_loss, val_accuracy) = evaluate(&net, &val_x, &val_y);
        history.push(EpochStats {
            epoch,
            train_loss,
            train_accuracy,
            val_loss,
            val_accuracy,
        });

        if val_loss < best_val {
            best_val = val_loss;
            best_epoch = epoch;
            best_params = net.flat_params();
            stale_epochs = 0;
        } else {
            stale_epochs += 1;
            if stale_epochs >= cfg.patience {
                break;
            }
        }
    }

    net.set_flat_params(&best_params);
    Ok((
        net,
        scaler,
        TrainHistory {
            epochs: history,
            best_epoch,
        },
    ))
}

/// Fisher-Yates with the crate's seeded generator.
fn shuffle(indices: &mut [usize], rng: &mut impl Rng) {
    for i in (1..indices.len()).rev() {
        let j = rng.random_range(0..=i);
        indices.swap(i, j);
    }
}

fn evaluate(net: &DenseNet, xs: &[Vec<f64>], ys: &[usize]) -> (f64, f64) {
    let mut loss = 0.0;
    let mut correct = 0usize;
    for (x, &y) in xs.iter().zip(ys) {
        let p = net.forward(x);
        loss -= p[y].max(1e-15).ln();
        if argmax(&p) == y {
            correct += 1;
        }
    }
    let count = xs.len().max(1) as f64;
    (loss / count, correct as f64 / count)
}

/// Index of the largest value, lowest index on ties.
#[must_use]
pub fn argmax(values: &[f64]) -> usize {
    let mut best = 0;
    for (i, &v) in values.iter().enumerate().skip(1) {
        if v > values[best] {
            best = i;
        }
    }
    best
}

/// Predict a waypoint and its confidence for an unscaled feature vector.
///
/// The confidence is the maximum softmax probability, which always lies in
/// `(1 / labels, 1]`.
pub fn predict(net: &DenseNet, scaler: &Scaler, features: &[f64]) -> Result<(Waypoint, f64)> {
    if features.len() != net.feature_dim() {
        return Err(Error::FeatureLengthMismatch {
            got: features.len(),
            expected: net.feature_dim(),
        });
    }
    let scaled = scaler.transform(features)?;
    let probs = net.forward(&scaled);
    let idx = argmax(&probs);
    Ok((net.label_map()[idx], probs[idx]))
}
