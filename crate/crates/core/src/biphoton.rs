//! Two-photon states as polynomials in creation operators.
//!
//! A biphoton state is a degree-2 polynomial in the sixteen creation
//! operators `p†_jk` (ports a, b, c, d × four basis modes) applied to the
//! vacuum. Operators commute, so a monomial is an unordered pair of labels.
//! The squared Fock norm weights a repeated-label monomial `(p†)²` by 2 and
//! a mixed one `p† q†` by 1.

use std::collections::BTreeMap;
use std::fmt;

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{invalid_parameter, invalid_state, Result};
use crate::interferometer::{transfer_matrix, Port};
use crate::modes::{BasisMode, PhaseSign, SpinOrbitAmplitudes};

/// Coefficients with smaller modulus are dropped after arithmetic.
pub const PRUNE_THRESHOLD: f64 = 1e-15;

/// Tolerance on `Σ|e_jk|² = 1` for inputs to the quantum layer.
pub const NORMALIZATION_TOLERANCE: f64 = 1e-10;

/// Creation operator `p†_jk`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub struct ModeLabel {
    pub port: Port,
    pub mode: BasisMode,
}

impl ModeLabel {
    pub fn new(port: Port, mode: BasisMode) -> Self {
        Self { port, mode }
    }

    /// The sixteen labels in port-major order.
    pub fn all() -> impl Iterator<Item = ModeLabel> {
        [Port::A, Port::B, Port::C, Port::D]
            .into_iter()
            .flat_map(|p| BasisMode::ALL.into_iter().map(move |m| ModeLabel::new(p, m)))
    }
}

impl fmt::Display for ModeLabel {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}†{}", self.port, self.mode)
    }
}

/// Unordered pair of creation operators, stored sorted.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Monomial(ModeLabel, ModeLabel);

impl Monomial {
    pub fn new(a: ModeLabel, b: ModeLabel) -> Self {
        if a <= b {
            Monomial(a, b)
        } else {
            Monomial(b, a)
        }
    }

    pub fn labels(&self) -> (ModeLabel, ModeLabel) {
        (self.0, self.1)
    }

    pub fn is_repeated(&self) -> bool {
        self.0 == self.1
    }

    /// `⟨vac| m m† |vac⟩`: 2 for `(p†)²`, 1 for `p† q†`.
    pub fn fock_weight(&self) -> f64 {
        if self.is_repeated() {
            2.0
        } else {
            1.0
        }
    }

    /// One photon at port c and one at port d.
    pub fn is_coincidence(&self) -> bool {
        matches!(
            (self.0.port, self.1.port),
            (Port::C, Port::D) | (Port::D, Port::C)
        )
    }

    pub fn is_input(&self) -> bool {
        self.0.port.is_input() && self.1.port.is_input()
    }
}

impl fmt::Display for Monomial {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{} {}", self.0, self.1)
    }
}

/// Linear combination of creation operators (a single-photon creation operator).
#[derive(Debug, Clone, PartialEq, Default)]
pub struct LinearForm {
    terms: BTreeMap<ModeLabel, Complex64>,
}

impl LinearForm {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn add_term(&mut self, label: ModeLabel, coef: Complex64) {
        *self.terms.entry(label).or_default() += coef;
    }

    pub fn with_term(mut self, label: ModeLabel, coef: Complex64) -> Self {
        self.add_term(label, coef);
        self
    }

    /// `Σ_jk e_jk p†_jk`.
    pub fn from_amplitudes(port: Port, amps: &SpinOrbitAmplitudes) -> Self {
        let mut form = Self::new();
        for (mode, e) in amps.iter() {
            form.add_term(ModeLabel::new(port, mode), e);
        }
        form
    }

    pub fn terms(&self) -> impl Iterator<Item = (ModeLabel, Complex64)> + '_ {
        self.terms.iter().map(|(l, c)| (*l, *c))
    }

    /// Product of two single-photon operators, expanded and pruned.
    pub fn product(&self, other: &LinearForm) -> OperatorPolynomial {
        let mut out = OperatorPolynomial::zero();
        for (l1, c1) in self.terms() {
            for (l2, c2) in other.terms() {
                out.accumulate(Monomial::new(l1, l2), c1 * c2);
            }
        }
        out.prune();
        out
    }

    pub fn square(&self) -> OperatorPolynomial {
        self.product(self)
    }
}

/// Sparse polynomial over degree-2 monomials.
#[derive(Debug, Clone, PartialEq, Default)]
pub struct OperatorPolynomial {
    terms: BTreeMap<Monomial, Complex64>,
}

impl OperatorPolynomial {
    pub fn zero() -> Self {
        Self::default()
    }

    pub fn from_terms(terms: impl IntoIterator<Item = (Monomial, Complex64)>) -> Self {
        let mut out = Self::zero();
        for (m, c) in terms {
            out.accumulate(m, c);
        }
        out.prune();
        out
    }

    fn accumulate(&mut self, m: Monomial, c: Complex64) {
        *self.terms.entry(m).or_default() += c;
    }

    fn prune(&mut self) {
        self.terms.retain(|_, c| c.norm() >= PRUNE_THRESHOLD);
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn terms(&self) -> impl Iterator<Item = (Monomial, Complex64)> + '_ {
        self.terms.iter().map(|(m, c)| (*m, *c))
    }

    pub fn coefficient(&self, m: &Monomial) -> Complex64 {
        self.terms.get(m).copied().unwrap_or_default()
    }

    pub fn scale(&self, s: Complex64) -> Self {
        Self::from_terms(self.terms().map(|(m, c)| (m, c * s)))
    }

    pub fn sub(&self, other: &Self) -> Self {
        Self::from_terms(self.terms().chain(other.terms().map(|(m, c)| (m, -c))))
    }

    /// Squared Fock norm `Σ |coef|² · weight`.
    pub fn fock_norm_sqr(&self) -> f64 {
        self.terms()
            .map(|(m, c)| c.norm_sqr() * m.fock_weight())
            .fold(0.0, |a, b| a + b)
    }

    pub fn normalized(&self) -> Result<Self> {
        let n = self.fock_norm_sqr();
        if n == 0.0 {
            return Err(invalid_state("cannot normalize the zero polynomial"));
        }
        Ok(self.scale((1.0 / n.sqrt()).into()))
    }

    /// Largest coefficient difference after dividing each polynomial by its
    /// own largest-modulus coefficient. Insensitive to a global complex factor.
    pub fn aligned_difference(&self, other: &Self) -> f64 {
        fn pivot(p: &OperatorPolynomial) -> Option<(Monomial, Complex64)> {
            p.terms()
                .max_by(|a, b| a.1.norm().total_cmp(&b.1.norm()).then_with(|| b.0.cmp(&a.0)))
        }
        let (Some((ma, ca)), Some(_)) = (pivot(self), pivot(other)) else {
            return if self.is_zero() && other.is_zero() {
                0.0
            } else {
                f64::INFINITY
            };
        };
        let cb = other.coefficient(&ma);
        if cb.norm() == 0.0 {
            return f64::INFINITY;
        }
        let a = self.scale(1.0 / ca);
        let b = other.scale(1.0 / cb);
        a.sub(&b).terms().map(|(_, c)| c.norm()).fold(0.0, f64::max)
    }
}

impl fmt::Display for OperatorPolynomial {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return f.write_str("0");
        }
        for (i, (m, c)) in self.terms().enumerate() {
            if i > 0 {
                f.write_str(" + ")?;
            }
            write!(f, "({:.6}{:+.6}i) {}", c.re, c.im, m)?;
        }
        Ok(())
    }
}

fn check_normalized(amps: &SpinOrbitAmplitudes) -> Result<()> {
    let n = amps.norm_sqr();
    if (n - 1.0).abs() > NORMALIZATION_TOLERANCE {
        return Err(invalid_parameter(format!(
            "biphoton amplitudes must satisfy Σ|e_jk|² = 1, got {n}"
        )));
    }
    Ok(())
}

/// `(Σ e_jk a†_jk)(Σ e_jk b†_jk)|vac⟩` for one photon per input port.
pub fn biphoton_input(amps: &SpinOrbitAmplitudes) -> Result<OperatorPolynomial> {
    check_normalized(amps)?;
    let a = LinearForm::from_amplitudes(Port::A, amps);
    let b = LinearForm::from_amplitudes(Port::B, amps);
    Ok(a.product(&b))
}

/// Output-port expansion of one input creation operator at phase `delta`:
/// `(a†, b†)ᵀ = U_jk(δ) (c†, d†)ᵀ`.
pub fn output_form(label: ModeLabel, delta: f64) -> Result<LinearForm> {
    let u = transfer_matrix(label.mode, delta).m.0;
    let row = match label.port {
        Port::A => 0,
        Port::B => 1,
        other => {
            return Err(invalid_state(format!(
                "expected an input-port operator, found port {other}"
            )))
        }
    };
    Ok(LinearForm::new()
        .with_term(ModeLabel::new(Port::C, label.mode), u[row][0])
        .with_term(ModeLabel::new(Port::D, label.mode), u[row][1]))
}

/// Rewrites an input-port polynomial in output-port operators.
pub fn substitute_output_operators(poly: &OperatorPolynomial, delta: f64) -> Result<OperatorPolynomial> {
    let mut out = OperatorPolynomial::zero();
    for (m, coef) in poly.terms() {
        let (l1, l2) = m.labels();
        let expanded = output_form(l1, delta)?.product(&output_form(l2, delta)?);
        for (om, oc) in expanded.terms() {
            out.accumulate(om, coef * oc);
        }
    }
    out.prune();
    Ok(out)
}

fn output_only(poly: &OperatorPolynomial) -> Result<()> {
    if let Some((m, _)) = poly.terms().find(|(m, _)| {
        let (a, b) = m.labels();
        a.port.is_input() || b.port.is_input()
    }) {
        return Err(invalid_state(format!("input-port operator in output state: {m}")));
    }
    Ok(())
}

/// Probability of one photon at each output port.
pub fn coincidence_probability(poly: &OperatorPolynomial) -> Result<f64> {
    output_only(poly)?;
    let norm = poly.fock_norm_sqr();
    if norm == 0.0 {
        return Err(invalid_state("zero polynomial has no detection statistics"));
    }
    let coincident: f64 = poly
        .terms()
        .filter(|(m, _)| m.is_coincidence())
        .map(|(m, c)| c.norm_sqr() * m.fock_weight())
        .fold(0.0, |a, b| a + b);
    Ok(coincident / norm)
}

/// Probability that both photons leave through the same output port.
pub fn bunching_probability(poly: &OperatorPolynomial) -> Result<f64> {
    output_only(poly)?;
    let norm = poly.fock_norm_sqr();
    if norm == 0.0 {
        return Err(invalid_state("zero polynomial has no detection statistics"));
    }
    let bunched: f64 = poly
        .terms()
        .filter(|(m, _)| !m.is_coincidence())
        .map(|(m, c)| c.norm_sqr() * m.fock_weight())
        .fold(0.0, |a, b| a + b);
    Ok(bunched / norm)
}

/// Collective creation operator `Ψ̂†_p∓ = (e00 p†00 + e11 p†11) ∓ i(e10 p†10 + e01 p†01)`.
pub fn collective_operator(amps: &SpinOrbitAmplitudes, port: Port, sign: PhaseSign) -> LinearForm {
    LinearForm::from_amplitudes(port, &crate::interferometer::psi_coefficients(amps, sign))
}

/// Bunched output `(Ψ̂†c∓² − Ψ̂†d∓²)|vac⟩ / 2`, normalized to unit Fock norm.
pub fn hom_output_state(amps: &SpinOrbitAmplitudes, sign: PhaseSign) -> Result<OperatorPolynomial> {
    check_normalized(amps)?;
    let c = collective_operator(amps, Port::C, sign).square();
    let d = collective_operator(amps, Port::D, sign).square();
    Ok(c.sub(&d).scale(0.5.into()))
}

/// Output state for a product-state photon pair at internal phase `delta`.
pub fn output_state(amps: &SpinOrbitAmplitudes, delta: f64) -> Result<OperatorPolynomial> {
    substitute_output_operators(&biphoton_input(amps)?, delta)
}
