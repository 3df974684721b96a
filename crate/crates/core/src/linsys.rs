//! Reciprocal eigenvalues of the tridiagonal Toeplitz matrix with `2y` on
//! the diagonal and `-1` beside it.
//!
//! With `t = cos(jπ/2^n)/y` the normalised eigenvalue is `x_j = 1 - t` and
//! `1/x_j ≈ Π_{i<m} (1 + t^{2^i})`, the truncated geometric series
//! `Σ_{s<2^m} t^s` written as a product. The circuits put
//! `2^{-m} Π_{i<m} (1 + t^{2^i})` on their flag.

use std::f64::consts::PI;

use serde::Serialize;

use crate::error::{QaaError, Result};
use crate::primitives::{append_binary_controlled_ry, inverse_ops, prepare_weights};
use crate::sim::{controls_for_value, Circuit, Control, FlagPredicate, GateKind, RegisterLayout, RegisterRole};
use crate::stateprep::ceil_log2;

/// Matrix of size `N = 2^n - 1` with diagonal `2y`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct ToeplitzSystem {
    pub n: usize,
    pub y: f64,
}

impl ToeplitzSystem {
    pub fn new(n: usize, y: f64) -> Result<Self> {
        if n == 0 || n > 20 {
            return Err(QaaError::InvalidParameter(format!("n = {n} outside 1..=20")));
        }
        if !y.is_finite() || y < 2.0 {
            let hint = if (y - 1.0).abs() < 1e-12 {
                " (y = 1 is the Poisson matrix, which needs a different solver)"
            } else {
                ""
            };
            return Err(QaaError::InvalidParameter(format!("y = {y} must be at least 2{hint}")));
        }
        Ok(ToeplitzSystem { n, y })
    }

    pub fn size(&self) -> usize {
        (1 << self.n) - 1
    }

    fn check_index(&self, j: usize) -> Result<()> {
        if j == 0 || j > self.size() {
            return Err(QaaError::IndexOutOfRange { index: j, lo: 1, hi: self.size() });
        }
        Ok(())
    }

    /// `jπ/2^n`.
    pub fn angle(&self, j: usize) -> f64 {
        j as f64 * PI / (1u64 << self.n) as f64
    }

    /// `λ_j = 2(y - cos(jπ/2^n))`.
    pub fn eigenvalue(&self, j: usize) -> Result<f64> {
        self.check_index(j)?;
        Ok(2.0 * (self.y - self.angle(j).cos()))
    }

    /// `x_j = λ_j / 2y`, inside `(1/2, 3/2)`.
    pub fn normalized(&self, j: usize) -> Result<f64> {
        Ok(self.eigenvalue(j)? / (2.0 * self.y))
    }

    /// `‖Av − λ_j v‖ / ‖v‖` for `v_k = sin(jkπ/2^n)`, `k = 1..N`.
    pub fn eigenpair_residual(&self, j: usize) -> Result<f64> {
        self.check_index(j)?;
        let size = self.size();
        if size > 4095 {
            return Err(QaaError::InvalidParameter(format!("N = {size} exceeds 4095")));
        }
        let lambda = self.eigenvalue(j)?;
        let theta = self.angle(j);
        let v: Vec<f64> = (1..=size).map(|k| (k as f64 * theta).sin()).collect();
        let mut res = 0.0;
        for r in 0..size {
            let mut av = 2.0 * self.y * v[r];
            if r > 0 {
                av -= v[r - 1];
            }
            if r + 1 < size {
                av -= v[r + 1];
            }
            res += (av - lambda * v[r]).powi(2);
        }
        let norm: f64 = v.iter().map(|x| x * x).sum();
        Ok((res / norm).sqrt())
    }
}

/// Factor count and truncation data for one system.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct ReciprocalPlan {
    pub n: usize,
    pub y: f64,
    /// Number of `(1 + t^{2^i})` factors.
    pub m: usize,
    /// Retained series terms, `2^m`.
    pub k: usize,
    /// `2^{-k+1}`.
    pub eps_bound: f64,
}

impl ReciprocalPlan {
    /// `m = ⌈log₂(4n + 6 + log₂ y)⌉`, enough for `ε ≤ 2^{-4n-4}`.
    pub fn for_system(sys: &ToeplitzSystem) -> Self {
        let arg = 4.0 * sys.n as f64 + 6.0 + sys.y.log2();
        let m = arg.log2().ceil() as usize;
        Self::build(sys, m)
    }

    pub fn with_factors(sys: &ToeplitzSystem, m: usize) -> Result<Self> {
        if m == 0 || m > 8 {
            return Err(QaaError::InvalidParameter(format!("factor count {m} outside 1..=8")));
        }
        Ok(Self::build(sys, m))
    }

    fn build(sys: &ToeplitzSystem, m: usize) -> Self {
        let k = 1usize << m;
        ReciprocalPlan { n: sys.n, y: sys.y, m, k, eps_bound: 2f64.powi(1 - k as i32) }
    }

    fn check(&self, sys: &ToeplitzSystem) -> Result<()> {
        if self.n != sys.n || self.y != sys.y {
            return Err(QaaError::PlanMismatch { plan_n: self.n, plan_y: self.y, sys_n: sys.n, sys_y: sys.y });
        }
        Ok(())
    }
}

/// `Π_{i<m} (1 + t^{2^i})` with `t = cos(jπ/2^n)/y`.
pub fn reciprocal_product(sys: &ToeplitzSystem, j: usize, plan: &ReciprocalPlan) -> Result<f64> {
    sys.check_index(j)?;
    plan.check(sys)?;
    Ok(product_series(sys.angle(j).cos() / sys.y, plan.m))
}

/// `Π_{i<m} (1 + t^{2^i})`, equal to `Σ_{i<2^m} t^i`.
pub fn product_series(t: f64, m: usize) -> f64 {
    let mut power = t;
    let mut prod = 1.0;
    for _ in 0..m {
        prod *= 1.0 + power;
        power *= power;
    }
    prod
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct TruncationBound {
    /// `2^{-k+1}`.
    pub bound: f64,
    /// `Σ_{i=k}^{k+N} (1-x)^i`, summed term by term.
    pub tail: f64,
}

/// Bound on the geometric-series tail after `k` terms for `x ∈ (1/2, 3/2)`.
pub fn truncation_error_bound(x: f64, k: usize) -> Result<TruncationBound> {
    if !(x > 0.5 && x < 1.5) {
        return Err(QaaError::InvalidParameter(format!("x = {x} outside (1/2, 3/2)")));
    }
    if k == 0 {
        return Err(QaaError::InvalidParameter("order k must be at least 1".into()));
    }
    let r = 1.0 - x;
    let mut term = r.powi(k as i32);
    let mut tail = 0.0;
    for _ in 0..4096 {
        tail += term;
        term *= r;
        if term == 0.0 {
            break;
        }
    }
    let bound = 2f64.powi(1 - k as i32);
    debug_assert!(tail.abs() <= bound);
    Ok(TruncationBound { bound, tail })
}

/// Frequencies and weights of `cos^K θ = 2^{-K} Σ_r C(K,r) cos((K-2r)θ)`,
/// folded onto `f = |K - 2r|`.
fn cosine_power_spectrum(k: usize) -> Vec<(usize, f64)> {
    // binomial(K, r)/2^K by the multiplicative recurrence
    let mut pmf = vec![0.0; k + 1];
    pmf[0] = 0.5f64.powi(k as i32);
    for r in 1..=k {
        pmf[r] = pmf[r - 1] * (k - r + 1) as f64 / r as f64;
    }
    let mut spectrum: Vec<(usize, f64)> = Vec::new();
    for (r, p) in pmf.into_iter().enumerate() {
        let f = k.abs_diff(2 * r);
        match spectrum.iter_mut().find(|(g, _)| *g == f) {
            Some(e) => e.1 += p,
            None => spectrum.push((f, p)),
        }
    }
    spectrum.sort_by_key(|e| e.0);
    spectrum
}

enum Branch {
    Cosine(usize),
    Zero,
}

/// Compact reciprocal circuit.
///
/// Factor `i` is one weighted LCU over a small combiner `c{i}` and a target
/// `t{i}`: the constant `1/2` is the frequency-0 branch, the power
/// `(cosφ · cos θ_j)^{2^i}/2` is spread over branches `Ry(2fθ_j)` with
/// binomial weights scaled by `cos^{2^i}φ` (`cosφ = 1/y`), and a branch
/// holding `X` soaks up the leftover weight with zero amplitude. The
/// `θ_j`-dependent rotations come from the data register through the
/// binary cascade. Flag: every combiner and target reads 0; the factors
/// multiply on their conjunction.
pub fn build_reciprocal_circuit(sys: &ToeplitzSystem, plan: &ReciprocalPlan) -> Result<Circuit> {
    plan.check(sys)?;
    let n = sys.n;
    let c_phi = 1.0 / sys.y;

    let mut factors = Vec::with_capacity(plan.m);
    for i in 0..plan.m {
        let k = 1usize << i;
        let scale = 0.5 * c_phi.powi(k as i32);
        let mut weights = Vec::new();
        let mut branches = Vec::new();
        for (f, p) in cosine_power_spectrum(k) {
            let w = scale * p + if f == 0 { 0.5 } else { 0.0 };
            weights.push(w);
            branches.push(Branch::Cosine(f));
        }
        if !branches.iter().any(|b| matches!(b, Branch::Cosine(0))) {
            weights.push(0.5);
            branches.push(Branch::Cosine(0));
        }
        let used: f64 = weights.iter().sum();
        weights.push((1.0 - used).max(0.0));
        branches.push(Branch::Zero);
        factors.push((weights, branches));
    }

    let mut layout = RegisterLayout::new();
    let data = layout.add("data", n, RegisterRole::Data)?;
    let mut regs = Vec::new();
    for (i, (weights, _)) in factors.iter().enumerate() {
        let comb = layout.add(&format!("c{i}"), ceil_log2(weights.len()).max(1), RegisterRole::Control)?;
        let target = layout.add(&format!("t{i}"), 1, RegisterRole::Work)?[0];
        regs.push((comb, target));
    }
    let mut c = Circuit::new(layout);
    let unit = PI / (1u64 << (n - 1)) as f64;

    let mut flag = FlagPredicate::default();
    for ((weights, branches), (comb, target)) in factors.iter().zip(&regs) {
        let prepare = prepare_weights(comb, weights)?;
        c.extend(prepare.clone())?;
        for (b, branch) in branches.iter().enumerate() {
            let select = controls_for_value(comb, b);
            match *branch {
                Branch::Cosine(0) => {}
                Branch::Cosine(f) => {
                    append_binary_controlled_ry(&mut c, &data, *target, f as f64 * unit, &select)?
                }
                Branch::Zero => c.controlled(GateKind::X, *target, select)?,
            }
        }
        c.extend(inverse_ops(&prepare))?;
        for &q in comb {
            flag.require(q, false)?;
        }
        flag.require(*target, false)?;
    }
    c.set_flag(flag)?;
    Ok(c)
}

/// Literal product form: factor `i` owns one LCU qubit and `2^i` pairs of
/// work qubits; each pair multiplies `cosφ` (a fixed `Ry(2φ)`) by
/// `cos θ_j` (the data cascade) on its `|00⟩`. Uses `n + m + 2(2^m - 1)`
/// qubits, so it only simulates for small `m`.
pub fn build_reciprocal_circuit_chained(sys: &ToeplitzSystem, plan: &ReciprocalPlan) -> Result<Circuit> {
    plan.check(sys)?;
    let n = sys.n;
    let phi = (1.0 / sys.y).acos();
    let unit = PI / (1u64 << (n - 1)) as f64;

    let mut layout = RegisterLayout::new();
    let data = layout.add("data", n, RegisterRole::Data)?;
    let lcu = layout.add("lcu", plan.m, RegisterRole::Control)?;
    let pairs: Vec<Vec<usize>> = (0..plan.m)
        .map(|i| layout.add(&format!("f{i}"), 2 << i, RegisterRole::Work))
        .collect::<Result<_>>()?;
    let mut c = Circuit::new(layout);

    for &q in &lcu {
        c.gate(GateKind::H, q)?;
    }
    for (i, work) in pairs.iter().enumerate() {
        let sel = [Control::on(lcu[i])];
        for pair in work.chunks(2) {
            c.controlled(GateKind::Ry(2.0 * phi), pair[0], sel.to_vec())?;
            append_binary_controlled_ry(&mut c, &data, pair[1], unit, &sel)?;
        }
    }
    for &q in &lcu {
        c.gate(GateKind::H, q)?;
    }

    let mut flag = FlagPredicate::zeros(&lcu);
    for work in &pairs {
        for &q in work {
            flag.require(q, false)?;
        }
    }
    c.set_flag(flag)?;
    Ok(c)
}

/// Flag amplitude of a reciprocal circuit for data value `j`.
pub fn simulate_reciprocal(circuit: &Circuit, j: usize) -> Result<f64> {
    let input = circuit.layout.basis_index(&[("data", j as u64)])?;
    Ok(circuit.flag_amplitude_for_input(input)?.re)
}
