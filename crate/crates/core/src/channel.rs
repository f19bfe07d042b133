//! Channel parameters and the unknown input qubit.

use std::f64::consts::FRAC_1_SQRT_2;

use num_complex::Complex64;
use rand::Rng;
use serde::{Serialize, Serializer};

use crate::error::{Error, Result};
use crate::statevec::StateVector;
use crate::CONSTRUCT_TOL;

/// Schmidt coefficients `(α, β)` of the shared resource `α|0..0> + β|1..1>`.
///
/// Both are real with `α ≥ β ≥ 0` and `α² + β² = 1`.
#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct ChannelSpec {
    alpha: f64,
    beta: f64,
}

impl ChannelSpec {
    pub fn new(alpha: f64, beta: f64) -> Result<Self> {
        if !alpha.is_finite() || !beta.is_finite() {
            return Err(Error::BadSpec("non-finite coefficient".into()));
        }
        if beta < 0.0 {
            return Err(Error::BadSpec(format!("beta = {beta} < 0")));
        }
        if alpha < beta {
            return Err(Error::BadSpec(format!("alpha = {alpha} < beta = {beta}")));
        }
        let n = alpha * alpha + beta * beta;
        if (n - 1.0).abs() > CONSTRUCT_TOL {
            return Err(Error::BadSpec(format!("alpha^2 + beta^2 = {n}")));
        }
        Ok(Self { alpha, beta })
    }

    /// Channel from the smaller coefficient, `α = sqrt(1 - β²)`.
    ///
    /// Values within the construction tolerance above `1/√2` snap to the
    /// maximally entangled channel.
    pub fn from_beta(beta: f64) -> Result<Self> {
        if !beta.is_finite() || beta < 0.0 {
            return Err(Error::BadSpec(format!("beta = {beta} must be >= 0")));
        }
        if (beta - FRAC_1_SQRT_2).abs() <= CONSTRUCT_TOL {
            return Ok(Self::maximal());
        }
        if beta > FRAC_1_SQRT_2 {
            return Err(Error::BadSpec(format!("beta = {beta} > 1/sqrt(2)")));
        }
        Ok(Self {
            alpha: (1.0 - beta * beta).sqrt(),
            beta,
        })
    }

    /// Channel from the larger coefficient, `β = sqrt(1 - α²)`.
    pub fn from_alpha(alpha: f64) -> Result<Self> {
        if !alpha.is_finite() || alpha > 1.0 + CONSTRUCT_TOL {
            return Err(Error::BadSpec(format!("alpha = {alpha} must be <= 1")));
        }
        let beta = (1.0 - (alpha * alpha).min(1.0)).sqrt();
        Self::from_beta(beta)
    }

    pub fn maximal() -> Self {
        Self {
            alpha: FRAC_1_SQRT_2,
            beta: FRAC_1_SQRT_2,
        }
    }

    pub fn alpha(&self) -> f64 {
        self.alpha
    }

    pub fn beta(&self) -> f64 {
        self.beta
    }

    pub fn is_maximal(&self) -> bool {
        (self.alpha - self.beta).abs() <= CONSTRUCT_TOL
    }

    /// The ancilla-assisted scheme's effective coefficients
    /// `α' = α²/sqrt(α⁴+β⁴)`, `β' = β²/sqrt(α⁴+β⁴)`.
    pub fn derived(&self) -> DerivedSchmidt {
        DerivedSchmidt::from_channel(self)
    }

    /// `α|0...0> + β|1...1>` over the given labels.
    pub fn state<S: AsRef<str>>(&self, labels: &[S]) -> Result<StateVector> {
        let mut amps = vec![Complex64::new(0.0, 0.0); 1usize << labels.len()];
        amps[0] = Complex64::new(self.alpha, 0.0);
        let last = amps.len() - 1;
        amps[last] += Complex64::new(self.beta, 0.0);
        StateVector::new(amps, labels)
    }
}

/// Coefficients of the two-dimensional discrimination problem that remains
/// after a type-b outcome in the ancilla-assisted scheme.
#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct DerivedSchmidt {
    pub alpha_prime: f64,
    pub beta_prime: f64,
}

impl DerivedSchmidt {
    pub fn from_channel(c: &ChannelSpec) -> Self {
        let (a2, b2) = (c.alpha * c.alpha, c.beta * c.beta);
        let n = (a2 * a2 + b2 * b2).sqrt();
        Self {
            alpha_prime: a2 / n,
            beta_prime: b2 / n,
        }
    }

    pub fn as_channel(&self) -> ChannelSpec {
        ChannelSpec {
            alpha: self.alpha_prime,
            beta: self.beta_prime,
        }
    }
}

/// The unknown qubit `a|0> + b|1>`.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct InputQubit {
    a: Complex64,
    b: Complex64,
}

impl InputQubit {
    pub fn new(a: Complex64, b: Complex64) -> Result<Self> {
        if ![a.re, a.im, b.re, b.im].iter().all(|x| x.is_finite()) {
            return Err(Error::BadInput("non-finite amplitude".into()));
        }
        let n = a.norm_sqr() + b.norm_sqr();
        if (n - 1.0).abs() > CONSTRUCT_TOL {
            return Err(Error::BadInput(format!("|a|^2 + |b|^2 = {n}")));
        }
        Ok(Self { a, b })
    }

    pub fn real(a: f64, b: f64) -> Result<Self> {
        Self::new(Complex64::new(a, 0.0), Complex64::new(b, 0.0))
    }

    /// `(sqrt(1/3), sqrt(2/3))`: unequal magnitudes so sign and swap errors
    /// in corrections show up.
    pub fn reference() -> Self {
        Self {
            a: Complex64::new((1.0f64 / 3.0).sqrt(), 0.0),
            b: Complex64::new((2.0f64 / 3.0).sqrt(), 0.0),
        }
    }

    /// Haar-random qubit.
    pub fn random<R: Rng + ?Sized>(rng: &mut R) -> Self {
        let u: f64 = rng.random();
        let (p, q): (f64, f64) = (rng.random(), rng.random());
        let tau = std::f64::consts::TAU;
        Self {
            a: Complex64::from_polar(u.sqrt(), tau * p),
            b: Complex64::from_polar((1.0 - u).sqrt(), tau * q),
        }
    }

    pub fn a(&self) -> Complex64 {
        self.a
    }

    pub fn b(&self) -> Complex64 {
        self.b
    }

    pub fn state(&self, label: &str) -> StateVector {
        StateVector::qubit(label, self.a, self.b).expect("validated input qubit")
    }
}

impl Serialize for InputQubit {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        use serde::ser::SerializeStruct;
        let mut st = s.serialize_struct("InputQubit", 2)?;
        st.serialize_field("a", &[self.a.re, self.a.im])?;
        st.serialize_field("b", &[self.b.re, self.b.im])?;
        st.end()
    }
}
