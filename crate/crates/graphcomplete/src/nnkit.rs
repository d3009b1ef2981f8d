//! Minimal dense numeric kernel: forward/gradient primitives, Adam,
//! a named parameter store, and finite-difference gradient checking.
//!
//! Everything is `f64` and full-batch. Backward passes are hand-composed by
//! the model code; each primitive here ships with its paired gradient
//! function so the compositions stay verifiable with [`grad_check`].

use std::collections::HashMap;
use std::io::{Read, Write};
use std::path::Path;

use rand::Rng;

use crate::{Error, Result};

/// Row-major dense matrix of `f64`.
#[derive(Clone, Debug, PartialEq)]
pub struct Dense2D {
    rows: usize,
    cols: usize,
    data: Vec<f64>,
}

impl Dense2D {
    pub fn zeros(rows: usize, cols: usize) -> Self {
        Dense2D {
            rows,
            cols,
            data: vec![0.0; rows * cols],
        }
    }

    pub fn from_vec(rows: usize, cols: usize, data: Vec<f64>) -> Result<Self> {
        if data.len() != rows * cols {
            return Err(Error::shape(
                "from_vec",
                format!("{}x{} needs {} values, got {}", rows, cols, rows * cols, data.len()),
            ));
        }
        Ok(Dense2D { rows, cols, data })
    }

    pub fn from_rows(rows: &[Vec<f64>]) -> Result<Self> {
        let r = rows.len();
        let c = rows.first().map_or(0, |row| row.len());
        let mut data = Vec::with_capacity(r * c);
        for row in rows {
            if row.len() != c {
                return Err(Error::shape("from_rows", "ragged rows"));
            }
            data.extend_from_slice(row);
        }
        Ok(Dense2D { rows: r, cols: c, data })
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    #[inline]
    pub fn at(&self, r: usize, c: usize) -> f64 {
        self.data[r * self.cols + c]
    }

    #[inline]
    pub fn at_mut(&mut self, r: usize, c: usize) -> &mut f64 {
        &mut self.data[r * self.cols + c]
    }

    #[inline]
    pub fn row(&self, r: usize) -> &[f64] {
        &self.data[r * self.cols..(r + 1) * self.cols]
    }

    #[inline]
    pub fn row_mut(&mut self, r: usize) -> &mut [f64] {
        &mut self.data[r * self.cols..(r + 1) * self.cols]
    }

    pub fn data(&self) -> &[f64] {
        &self.data
    }

    pub fn data_mut(&mut self) -> &mut [f64] {
        &mut self.data
    }

    pub fn fill(&mut self, v: f64) {
        self.data.iter_mut().for_each(|x| *x = v);
    }

    pub fn is_finite(&self) -> bool {
        self.data.iter().all(|v| v.is_finite())
    }

    pub fn transpose(&self) -> Dense2D {
        let mut out = Dense2D::zeros(self.cols, self.rows);
        for r in 0..self.rows {
            for c in 0..self.cols {
                *out.at_mut(c, r) = self.at(r, c);
            }
        }
        out
    }

    /// Elementwise in-place `self += other`.
    pub fn add_assign(&mut self, other: &Dense2D) -> Result<()> {
        if self.rows != other.rows || self.cols != other.cols {
            return Err(Error::shape(
                "add_assign",
                format!("{}x{} vs {}x{}", self.rows, self.cols, other.rows, other.cols),
            ));
        }
        for (a, b) in self.data.iter_mut().zip(&other.data) {
            *a += b;
        }
        Ok(())
    }

    pub fn scale(&mut self, s: f64) {
        self.data.iter_mut().for_each(|x| *x *= s);
    }
}

// ---------------------------------------------------------------------------
// forward primitives and paired gradients
// ---------------------------------------------------------------------------

/// C = A · B.
pub fn matmul(a: &Dense2D, b: &Dense2D) -> Result<Dense2D> {
    if a.cols != b.rows {
        return Err(Error::shape(
            "matmul",
            format!("{}x{} · {}x{}", a.rows, a.cols, b.rows, b.cols),
        ));
    }
    let mut out = Dense2D::zeros(a.rows, b.cols);
    for i in 0..a.rows {
        let arow = a.row(i);
        let orow = out.row_mut(i);
        for (k, &av) in arow.iter().enumerate() {
            if av == 0.0 {
                continue;
            }
            let brow = b.row(k);
            for (o, &bv) in orow.iter_mut().zip(brow) {
                *o += av * bv;
            }
        }
    }
    Ok(out)
}

/// Gradients of C = A · B given dC: returns (dA, dB).
pub fn matmul_backward(a: &Dense2D, b: &Dense2D, d_out: &Dense2D) -> Result<(Dense2D, Dense2D)> {
    if d_out.rows != a.rows || d_out.cols != b.cols {
        return Err(Error::shape(
            "matmul_backward",
            format!("d_out {}x{} for {}x{}·{}x{}", d_out.rows, d_out.cols, a.rows, a.cols, b.rows, b.cols),
        ));
    }
    let da = matmul(d_out, &b.transpose())?;
    let db = matmul(&a.transpose(), d_out)?;
    Ok((da, db))
}

/// H + b with b broadcast over rows (b is 1 x cols).
pub fn add_bias(h: &Dense2D, b: &Dense2D) -> Result<Dense2D> {
    if b.rows != 1 || b.cols != h.cols {
        return Err(Error::shape(
            "add_bias",
            format!("bias {}x{} for {}x{}", b.rows, b.cols, h.rows, h.cols),
        ));
    }
    let mut out = h.clone();
    for r in 0..out.rows {
        for (o, bv) in out.row_mut(r).iter_mut().zip(b.row(0)) {
            *o += bv;
        }
    }
    Ok(out)
}

/// Gradient of add_bias: (dH, dB). dH is just d_out.
pub fn add_bias_backward(d_out: &Dense2D) -> (Dense2D, Dense2D) {
    let mut db = Dense2D::zeros(1, d_out.cols);
    for r in 0..d_out.rows {
        for (g, d) in db.row_mut(0).iter_mut().zip(d_out.row(r)) {
            *g += d;
        }
    }
    (d_out.clone(), db)
}

pub fn relu(x: &Dense2D) -> Dense2D {
    let mut out = x.clone();
    out.data.iter_mut().for_each(|v| {
        if *v < 0.0 {
            *v = 0.0;
        }
    });
    out
}

pub fn relu_backward(x: &Dense2D, d_out: &Dense2D) -> Dense2D {
    let mut dx = d_out.clone();
    for (d, &xv) in dx.data.iter_mut().zip(&x.data) {
        if xv <= 0.0 {
            *d = 0.0;
        }
    }
    dx
}

pub fn leaky_relu(x: &Dense2D, slope: f64) -> Dense2D {
    let mut out = x.clone();
    out.data.iter_mut().for_each(|v| {
        if *v < 0.0 {
            *v *= slope;
        }
    });
    out
}

pub fn leaky_relu_backward(x: &Dense2D, slope: f64, d_out: &Dense2D) -> Dense2D {
    let mut dx = d_out.clone();
    for (d, &xv) in dx.data.iter_mut().zip(&x.data) {
        if xv <= 0.0 {
            *d *= slope;
        }
    }
    dx
}

#[inline]
pub fn sigmoid_scalar(x: f64) -> f64 {
    if x >= 0.0 {
        1.0 / (1.0 + (-x).exp())
    } else {
        let e = x.exp();
        e / (1.0 + e)
    }
}

/// Numerically stable ln(1 + e^x).
#[inline]
pub fn softplus_scalar(x: f64) -> f64 {
    if x > 0.0 {
        x + (-x).exp().ln_1p()
    } else {
        x.exp().ln_1p()
    }
}

pub fn sigmoid(x: &Dense2D) -> Dense2D {
    let mut out = x.clone();
    out.data.iter_mut().for_each(|v| *v = sigmoid_scalar(*v));
    out
}

/// Gradient of sigmoid given the forward *output* y.
pub fn sigmoid_backward(y: &Dense2D, d_out: &Dense2D) -> Dense2D {
    let mut dx = d_out.clone();
    for (d, &yv) in dx.data.iter_mut().zip(&y.data) {
        *d *= yv * (1.0 - yv);
    }
    dx
}

pub fn softplus(x: &Dense2D) -> Dense2D {
    let mut out = x.clone();
    out.data.iter_mut().for_each(|v| *v = softplus_scalar(*v));
    out
}

pub fn softplus_backward(x: &Dense2D, d_out: &Dense2D) -> Dense2D {
    let mut dx = d_out.clone();
    for (d, &xv) in dx.data.iter_mut().zip(&x.data) {
        *d *= sigmoid_scalar(xv);
    }
    dx
}

/// Normalizes each row to unit L2 norm; all-zero rows stay zero.
pub fn row_l2_normalize(x: &Dense2D) -> Dense2D {
    let mut out = x.clone();
    for r in 0..out.rows {
        let row = out.row_mut(r);
        let norm = row.iter().map(|v| v * v).sum::<f64>().sqrt();
        if norm > 0.0 {
            row.iter_mut().for_each(|v| *v /= norm);
        }
    }
    out
}

pub fn row_l2_normalize_backward(x: &Dense2D, d_out: &Dense2D) -> Dense2D {
    let mut dx = Dense2D::zeros(x.rows, x.cols);
    for r in 0..x.rows {
        let xr = x.row(r);
        let dr = d_out.row(r);
        let norm = xr.iter().map(|v| v * v).sum::<f64>().sqrt();
        if norm == 0.0 {
            continue;
        }
        let y: Vec<f64> = xr.iter().map(|v| v / norm).collect();
        let dot: f64 = y.iter().zip(dr).map(|(a, b)| a * b).sum();
        for (i, g) in dx.row_mut(r).iter_mut().enumerate() {
            *g = (dr[i] - y[i] * dot) / norm;
        }
    }
    dx
}

#[inline]
fn dot(a: &[f64], b: &[f64]) -> f64 {
    a.iter().zip(b).map(|(x, y)| x * y).sum()
}

#[inline]
fn norm(a: &[f64]) -> f64 {
    dot(a, a).sqrt()
}

/// Cosine similarity of two vectors; 0 if either has zero norm.
pub fn cosine(a: &[f64], b: &[f64]) -> f64 {
    let na = norm(a);
    let nb = norm(b);
    if na == 0.0 || nb == 0.0 {
        return 0.0;
    }
    dot(a, b) / (na * nb)
}

/// Accumulates d(cos(a,b))·upstream into `da` and `db`.
/// Zero-norm inputs get zero gradient, matching the forward convention.
pub fn cosine_grad_accum(a: &[f64], b: &[f64], upstream: f64, da: &mut [f64], db: &mut [f64]) {
    let na = norm(a);
    let nb = norm(b);
    if na == 0.0 || nb == 0.0 {
        return;
    }
    let d = dot(a, b);
    let c = d / (na * nb);
    for i in 0..a.len() {
        da[i] += upstream * (b[i] / (na * nb) - c * a[i] / (na * na));
        db[i] += upstream * (a[i] / (na * nb) - c * b[i] / (nb * nb));
    }
}

/// Per-row cosine similarity of matching rows of A and B; returns n x 1.
pub fn cosine_rows(a: &Dense2D, b: &Dense2D) -> Result<Dense2D> {
    if a.rows != b.rows || a.cols != b.cols {
        return Err(Error::shape(
            "cosine_rows",
            format!("{}x{} vs {}x{}", a.rows, a.cols, b.rows, b.cols),
        ));
    }
    let mut out = Dense2D::zeros(a.rows, 1);
    for r in 0..a.rows {
        *out.at_mut(r, 0) = cosine(a.row(r), b.row(r));
    }
    Ok(out)
}

/// Gradients of cosine_rows given dC (n x 1): returns (dA, dB).
pub fn cosine_rows_backward(a: &Dense2D, b: &Dense2D, d_out: &Dense2D) -> Result<(Dense2D, Dense2D)> {
    if d_out.rows != a.rows || d_out.cols != 1 {
        return Err(Error::shape("cosine_rows_backward", "d_out must be n x 1"));
    }
    let mut da = Dense2D::zeros(a.rows, a.cols);
    let mut db = Dense2D::zeros(b.rows, b.cols);
    for r in 0..a.rows {
        let up = d_out.at(r, 0);
        cosine_grad_accum(a.row(r), b.row(r), up, da.row_mut(r), db.row_mut(r));
    }
    Ok((da, db))
}

/// Row-wise softmax.
pub fn softmax_rows(x: &Dense2D) -> Dense2D {
    let mut out = x.clone();
    for r in 0..out.rows {
        let row = out.row_mut(r);
        let max = row.iter().cloned().fold(f64::NEG_INFINITY, f64::max);
        let mut sum = 0.0;
        for v in row.iter_mut() {
            *v = (*v - max).exp();
            sum += *v;
        }
        row.iter_mut().for_each(|v| *v /= sum);
    }
    out
}

/// Gradient of softmax_rows given the forward output y.
pub fn softmax_rows_backward(y: &Dense2D, d_out: &Dense2D) -> Dense2D {
    let mut dx = Dense2D::zeros(y.rows, y.cols);
    for r in 0..y.rows {
        let yr = y.row(r);
        let dr = d_out.row(r);
        let s: f64 = yr.iter().zip(dr).map(|(a, b)| a * b).sum();
        for (i, g) in dx.row_mut(r).iter_mut().enumerate() {
            *g = yr[i] * (dr[i] - s);
        }
    }
    dx
}

/// Glorot uniform init: U(-a, a) with a = sqrt(6 / (fan_in + fan_out)).
pub fn glorot_uniform<R: Rng>(rows: usize, cols: usize, rng: &mut R) -> Dense2D {
    let a = (6.0 / (rows + cols) as f64).sqrt();
    let mut out = Dense2D::zeros(rows, cols);
    out.data.iter_mut().for_each(|v| *v = rng.gen_range(-a..a));
    out
}

// ---------------------------------------------------------------------------
// parameter store
// ---------------------------------------------------------------------------

struct ParamEntry {
    name: String,
    value: Dense2D,
    grad: Dense2D,
}

/// Named parameters with matching gradient buffers, iterated in insertion order.
pub struct ParamStore {
    entries: Vec<ParamEntry>,
    index: HashMap<String, usize>,
}

impl Default for ParamStore {
    fn default() -> Self {
        Self::new()
    }
}

impl Clone for ParamStore {
    fn clone(&self) -> Self {
        let mut out = ParamStore::new();
        for e in &self.entries {
            out.insert(&e.name, e.value.clone()).unwrap();
            let idx = out.index[&e.name];
            out.entries[idx].grad = e.grad.clone();
        }
        out
    }
}

impl ParamStore {
    pub fn new() -> Self {
        ParamStore {
            entries: Vec::new(),
            index: HashMap::new(),
        }
    }

    pub fn insert(&mut self, name: &str, value: Dense2D) -> Result<()> {
        if self.index.contains_key(name) {
            return Err(Error::invalid(format!("duplicate parameter name: {name}")));
        }
        let grad = Dense2D::zeros(value.rows(), value.cols());
        self.index.insert(name.to_string(), self.entries.len());
        self.entries.push(ParamEntry {
            name: name.to_string(),
            value,
            grad,
        });
        Ok(())
    }

    pub fn len(&self) -> usize {
        self.entries.len()
    }

    pub fn is_empty(&self) -> bool {
        self.entries.is_empty()
    }

    pub fn names(&self) -> impl Iterator<Item = &str> {
        self.entries.iter().map(|e| e.name.as_str())
    }

    pub fn value(&self, name: &str) -> &Dense2D {
        let idx = self.index[name];
        &self.entries[idx].value
    }

    pub fn value_mut(&mut self, name: &str) -> &mut Dense2D {
        let idx = self.index[name];
        &mut self.entries[idx].value
    }

    pub fn grad(&self, name: &str) -> &Dense2D {
        let idx = self.index[name];
        &self.entries[idx].grad
    }

    pub fn grad_mut(&mut self, name: &str) -> &mut Dense2D {
        let idx = self.index[name];
        &mut self.entries[idx].grad
    }

    pub fn accumulate_grad(&mut self, name: &str, delta: &Dense2D) -> Result<()> {
        self.grad_mut(name).add_assign(delta)
    }

    pub fn zero_grads(&mut self) {
        for e in &mut self.entries {
            e.grad.fill(0.0);
        }
    }

    /// Copies parameter values (not grads) from another store with identical layout.
    pub fn copy_values_from(&mut self, other: &ParamStore) -> Result<()> {
        if self.len() != other.len() {
            return Err(Error::invalid("param store layout mismatch"));
        }
        for (mine, theirs) in self.entries.iter_mut().zip(&other.entries) {
            if mine.name != theirs.name {
                return Err(Error::invalid("param store layout mismatch"));
            }
            mine.value = theirs.value.clone();
        }
        Ok(())
    }
}

// ---------------------------------------------------------------------------
// Adam
// ---------------------------------------------------------------------------

/// Bias-corrected Adam over a [`ParamStore`].
pub struct Adam {
    pub lr: f64,
    pub beta1: f64,
    pub beta2: f64,
    pub eps: f64,
    step: u64,
    moments: Vec<(Dense2D, Dense2D)>,
}

impl Adam {
    pub fn new(lr: f64) -> Self {
        Adam {
            lr,
            beta1: 0.9,
            beta2: 0.999,
            eps: 1e-8,
            step: 0,
            moments: Vec::new(),
        }
    }

    /// Applies one update; gradients are zeroed afterwards.
    pub fn step(&mut self, store: &mut ParamStore) -> Result<()> {
        if self.moments.is_empty() {
            self.moments = store
                .entries
                .iter()
                .map(|e| {
                    (
                        Dense2D::zeros(e.value.rows(), e.value.cols()),
                        Dense2D::zeros(e.value.rows(), e.value.cols()),
                    )
                })
                .collect();
        }
        for e in &store.entries {
            if !e.grad.is_finite() {
                return Err(Error::NonFinite(format!("gradient of parameter '{}'", e.name)));
            }
        }
        self.step += 1;
        let t = self.step as f64;
        let bc1 = 1.0 - self.beta1.powf(t);
        let bc2 = 1.0 - self.beta2.powf(t);
        for (e, (m, v)) in store.entries.iter_mut().zip(self.moments.iter_mut()) {
            for i in 0..e.value.data.len() {
                let g = e.grad.data[i];
                m.data[i] = self.beta1 * m.data[i] + (1.0 - self.beta1) * g;
                v.data[i] = self.beta2 * v.data[i] + (1.0 - self.beta2) * g * g;
                let m_hat = m.data[i] / bc1;
                let v_hat = v.data[i] / bc2;
                e.value.data[i] -= self.lr * m_hat / (v_hat.sqrt() + self.eps);
            }
            e.grad.fill(0.0);
        }
        Ok(())
    }
}

// ---------------------------------------------------------------------------
// gradient checking
// ---------------------------------------------------------------------------

/// Compares the gradients currently stored in `store` against central finite
/// differences of `loss_fn`, returning the worst relative error.
///
/// `max_coords_per_param` = 0 checks every coordinate; otherwise a seeded
/// sample of that many coordinates per parameter is checked.
pub fn grad_check<F>(
    mut loss_fn: F,
    store: &mut ParamStore,
    h: f64,
    max_coords_per_param: usize,
    seed: u64,
) -> Result<f64>
where
    F: FnMut(&ParamStore) -> Result<f64>,
{
    use rand::seq::SliceRandom;
    use rand::SeedableRng;

    let base = loss_fn(store)?;
    if !base.is_finite() {
        return Err(Error::NonFinite("loss at grad_check base point".into()));
    }
    let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(seed);
    let mut worst = 0.0f64;
    for pi in 0..store.entries.len() {
        let n = store.entries[pi].value.data.len();
        let coords: Vec<usize> = if max_coords_per_param == 0 || n <= max_coords_per_param {
            (0..n).collect()
        } else {
            let mut all: Vec<usize> = (0..n).collect();
            all.shuffle(&mut rng);
            all.truncate(max_coords_per_param);
            all
        };
        for ci in coords {
            let orig = store.entries[pi].value.data[ci];
            store.entries[pi].value.data[ci] = orig + h;
            let lp = loss_fn(store)?;
            store.entries[pi].value.data[ci] = orig - h;
            let lm = loss_fn(store)?;
            store.entries[pi].value.data[ci] = orig;
            if !lp.is_finite() || !lm.is_finite() {
                return Err(Error::NonFinite("loss during finite differencing".into()));
            }
            let fd = (lp - lm) / (2.0 * h);
            let analytic = store.entries[pi].grad.data[ci];
            let denom = analytic.abs().max(fd.abs()).max(1e-3);
            let rel = (analytic - fd).abs() / denom;
            if rel > worst {
                worst = rel;
            }
        }
    }
    Ok(worst)
}

// ---------------------------------------------------------------------------
// checkpoint format
// ---------------------------------------------------------------------------

const CHECKPOINT_VERSION: u32 = 1;

/// Writes a parameter store as a binary checkpoint:
/// u32 version, u64 param count, then per parameter
/// (u32 name length, name bytes, u64 rows, u64 cols, f64-LE values).
pub fn save_params(store: &ParamStore, path: &Path) -> Result<()> {
    let mut f = std::io::BufWriter::new(std::fs::File::create(path)?);
    f.write_all(&CHECKPOINT_VERSION.to_le_bytes())?;
    f.write_all(&(store.len() as u64).to_le_bytes())?;
    for e in &store.entries {
        f.write_all(&(e.name.len() as u32).to_le_bytes())?;
        f.write_all(e.name.as_bytes())?;
        f.write_all(&(e.value.rows() as u64).to_le_bytes())?;
        f.write_all(&(e.value.cols() as u64).to_le_bytes())?;
        for v in e.value.data() {
            f.write_all(&v.to_le_bytes())?;
        }
    }
    Ok(())
}

pub fn load_params(path: &Path) -> Result<ParamStore> {
    let mut f = std::io::BufReader::new(std::fs::File::open(path)?);
    let mut u32b = [0u8; 4];
    let mut u64b = [0u8; 8];
    f.read_exact(&mut u32b)?;
    let version = u32::from_le_bytes(u32b);
    if version != CHECKPOINT_VERSION {
        return Err(Error::invalid(format!("unsupported checkpoint version {version}")));
    }
    f.read_exact(&mut u64b)?;
    let count = u64::from_le_bytes(u64b) as usize;
    let mut store = ParamStore::new();
    for _ in 0..count {
        f.read_exact(&mut u32b)?;
        let name_len = u32::from_le_bytes(u32b) as usize;
        let mut name_bytes = vec![0u8; name_len];
        f.read_exact(&mut name_bytes)?;
        let name = String::from_utf8(name_bytes)
            .map_err(|_| Error::invalid("non-utf8 parameter name in checkpoint"))?;
        f.read_exact(&mut u64b)?;
        let rows = u64::from_le_bytes(u64b) as usize;
        f.read_exact(&mut u64b)?;
        let cols = u64::from_le_bytes(u64b) as usize;
        let mut data = vec![0.0f64; rows * cols];
        for v in data.iter_mut() {
            f.read_exact(&mut u64b)?;
            *v = f64::from_le_bytes(u64b);
        }
        store.insert(&name, Dense2D::from_vec(rows, cols, data)?)?;
    }
    Ok(store)
}
