//! One-hidden-layer perceptron with hand-written backpropagation.
//!
//! Parameters live in one flat vector laid out as
//! `[w1 (hidden x input, row-major), b1, w2 (output x hidden, row-major), b2]`
//! so optimizers and checkpoints can treat them uniformly.

use rand::Rng;

#[derive(Debug, Clone, PartialEq)]
pub struct Mlp {
    input: usize,
    hidden: usize,
    output: usize,
    params: Vec<f64>,
}

/// Activations kept from a forward pass for the backward pass.
#[derive(Debug, Clone)]
pub struct Forward {
    pre: Vec<f64>,
    hidden: Vec<f64>,
    pub out: Vec<f64>,
}

impl Mlp {
    pub fn zeros(input: usize, hidden: usize, output: usize) -> Self {
        let n = hidden * input + hidden + output * hidden + output;
        Self {
            input,
            hidden,
            output,
            params: vec![0.0; n],
        }
    }

    /// Uniform initialisation in `±1/sqrt(fan_in)` per layer.
    pub fn init<R: Rng + ?Sized>(input: usize, hidden: usize, output: usize, rng: &mut R) -> Self {
        let mut net = Self::zeros(input, hidden, output);
        let b1 = 1.0 / (input.max(1) as f64).sqrt();
        let b2 = 1.0 / (hidden.max(1) as f64).sqrt();
        let split = hidden * input + hidden;
        for (i, p) in net.params.iter_mut().enumerate() {
            let bound = if i < split { b1 } else { b2 };
            *p = rng.gen_range(-bound..bound);
        }
        net
    }

    pub fn from_params(input: usize, hidden: usize, output: usize, params: Vec<f64>) -> Option<Self> {
        let net = Self::zeros(input, hidden, output);
        (params.len() == net.params.len()).then_some(Self { params, ..net })
    }

    pub fn input_dim(&self) -> usize {
        self.input
    }

    pub fn hidden_dim(&self) -> usize {
        self.hidden
    }

    pub fn output_dim(&self) -> usize {
        self.output
    }

    pub fn params(&self) -> &[f64] {
        &self.params
    }

    pub fn params_mut(&mut self) -> &mut [f64] {
        &mut self.params
    }

    pub fn num_params(&self) -> usize {
        self.params.len()
    }

    fn offsets(&self) -> (usize, usize, usize) {
        let b1 = self.hidden * self.input;
        let w2 = b1 + self.hidden;
        let b2 = w2 + self.output * self.hidden;
        (b1, w2, b2)
    }

    pub fn forward(&self, x: &[f64]) -> Forward {
        assert_eq!(x.len(), self.input, "input length mismatch");
        let (ob1, ow2, ob2) = self.offsets();
        let p = &self.params;
        let mut pre = vec![0.0; self.hidden];
        for (h, z) in pre.iter_mut().enumerate() {
            let row = &p[h * self.input..(h + 1) * self.input];
            *z = p[ob1 + h] + row.iter().zip(x).map(|(w, xi)| w * xi).sum::<f64>();
        }
        let hidden: Vec<f64> = pre.iter().map(|&z| z.max(0.0)).collect();
        let mut out = vec![0.0; self.output];
        for (o, y) in out.iter_mut().enumerate() {
            let row = &p[ow2 + o * self.hidden..ow2 + (o + 1) * self.hidden];
            *y = p[ob2 + o] + row.iter().zip(&hidden).map(|(w, hi)| w * hi).sum::<f64>();
        }
        Forward { pre, hidden, out }
    }

    /// Accumulate `d loss / d params` into `grad` given `d loss / d out`.
    pub fn backward(&self, x: &[f64], fwd: &Forward, d_out: &[f64], grad: &mut [f64]) {
        debug_assert_eq!(grad.len(), self.params.len());
        let (ob1, ow2, ob2) = self.offsets();
        let p = &self.params;
        let mut d_hidden = vec![0.0; self.hidden];
        for (o, &g) in d_out.iter().enumerate() {
            if g == 0.0 {
                continue;
            }
            grad[ob2 + o] += g;
            let base = ow2 + o * self.hidden;
            for h in 0..self.hidden {
                grad[base + h] += g * fwd.hidden[h];
                d_hidden[h] += g * p[base + h];
            }
        }
        for h in 0..self.hidden {
            if fwd.pre[h] <= 0.0 {
                continue;
            }
            let g = d_hidden[h];
            grad[ob1 + h] += g;
            let base = h * self.input;
            for (i, &xi) in x.iter().enumerate() {
                grad[base + i] += g * xi;
            }
        }
    }
}

/// Numerically stable softmax.
pub fn softmax(logits: &[f64]) -> Vec<f64> {
    let max = logits.iter().copied().fold(f64::NEG_INFINITY, f64::max);
    let exps: Vec<f64> = logits.iter().map(|&l| (l - max).exp()).collect();
    let sum: f64 = exps.iter().sum();
    exps.into_iter().map(|e| e / sum).collect()
}
