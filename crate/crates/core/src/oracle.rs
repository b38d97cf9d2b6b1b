//! Exact verification of the adjoint identity on the torus.
//!
//! Abstract coefficients are replaced by random trigonometric polynomials,
//! test sections `sigma`, `tau` are drawn the same way, and
//!
//! ```text
//! delta = int <sigma, L tau> - int <L* sigma, tau>
//! ```
//!
//! is computed exactly. On a closed torus integration by parts has no
//! boundary terms, so `delta` must be the rational zero.

use alloc::collections::{BTreeMap, BTreeSet};
use alloc::string::ToString;
use alloc::vec::Vec;

use num_traits::Zero;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::error::{Error, Result};
use crate::gen::random_rational;
use crate::jet::{JetVar, Var};
use crate::multi_index::MultiIndex;
use crate::operator::OperatorNF;
use crate::poly::ScalarPoly;
use crate::trig::TrigPoly;
use crate::Rational;

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct OracleParams {
    /// Bound on each frequency component.
    pub max_freq: i64,
    pub denom_bound: i64,
    pub max_terms: usize,
}

impl Default for OracleParams {
    fn default() -> Self {
        OracleParams { max_freq: 3, denom_bound: 16, max_terms: 3 }
    }
}

/// A random trigonometric polynomial with frequencies in `[-F, F]^n`.
pub fn random_trig<R: Rng + ?Sized>(rng: &mut R, dim: usize, p: &OracleParams) -> TrigPoly {
    let mut out = TrigPoly::zero(dim);
    for _ in 0..rng.random_range(1..=p.max_terms.max(1)) {
        let k: Vec<i64> = (0..dim).map(|_| rng.random_range(-p.max_freq..=p.max_freq)).collect();
        out.add_cos(&k, random_rational(rng, 8, p.denom_bound));
        out.add_sin(&k, random_rational(rng, 8, p.denom_bound));
    }
    out
}

/// Values for undifferentiated coefficient components, keyed by
/// [`JetVar::key`].
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Assignment {
    dim: usize,
    values: BTreeMap<JetVar, TrigPoly>,
}

impl Assignment {
    pub fn new(dim: usize) -> Self {
        Assignment { dim, values: BTreeMap::new() }
    }

    pub fn insert(&mut self, component: &JetVar, value: TrigPoly) {
        assert_eq!(value.dim(), self.dim, "torus dimension mismatch");
        self.values.insert(component.key(), value);
    }

    pub fn get(&self, component: &JetVar) -> Option<&TrigPoly> {
        self.values.get(&component.key())
    }

    /// Draws a value for every component used by `ops`, in component order.
    pub fn random_for<R: Rng + ?Sized>(ops: &[&OperatorNF], params: &OracleParams, rng: &mut R) -> Result<Self> {
        let keys = components(ops)?;
        let dim = ops.first().map_or(1, |l| l.dim());
        let mut a = Assignment::new(dim);
        for k in keys {
            let v = random_trig(rng, dim, params);
            a.values.insert(k, v);
        }
        Ok(a)
    }

    /// `p` with every jet replaced by the derivative of its assigned value.
    pub fn eval(&self, p: &ScalarPoly) -> Result<TrigPoly> {
        let dim = self.dim;
        p.eval(
            |v| match v {
                Var::Coord(_) => Err(Error::CoordinateOnTorus),
                Var::Jet(j) => self
                    .get(j)
                    .map(|t| t.derive_multi(j.deriv()))
                    .ok_or_else(|| Error::Unassigned(j.symbol().name().to_string())),
            },
            |c| TrigPoly::constant(dim, c.clone()),
        )
    }
}

/// Undifferentiated components of every jet in `ops`.
fn components(ops: &[&OperatorNF]) -> Result<BTreeSet<JetVar>> {
    let mut keys = BTreeSet::new();
    for l in ops {
        for (_, m) in l.terms() {
            for v in m.entries().iter().flat_map(|p| p.vars()) {
                match v {
                    Var::Coord(_) => return Err(Error::CoordinateOnTorus),
                    Var::Jet(j) => {
                        keys.insert(j.key());
                    }
                }
            }
        }
    }
    Ok(keys)
}

/// An operator with trigonometric-polynomial coefficients: plain
/// coefficient matrices of `d^alpha`, row-major.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ConcreteOperator {
    dim: usize,
    rank: usize,
    terms: BTreeMap<MultiIndex, Vec<TrigPoly>>,
}

impl ConcreteOperator {
    pub fn rank(&self) -> usize {
        self.rank
    }

    pub fn coefficient(&self, alpha: &MultiIndex) -> Option<&[TrigPoly]> {
        self.terms.get(alpha).map(Vec::as_slice)
    }

    pub fn apply(&self, column: &[TrigPoly]) -> Result<Vec<TrigPoly>> {
        if column.len() != self.rank {
            return Err(Error::ShapeMismatch { expected: self.rank, found: column.len() });
        }
        let mut out = alloc::vec![TrigPoly::zero(self.dim); self.rank];
        for (alpha, c) in &self.terms {
            let df: Vec<TrigPoly> = column.iter().map(|f| f.derive_multi(alpha)).collect();
            for (i, o) in out.iter_mut().enumerate() {
                for (j, f) in df.iter().enumerate() {
                    let cij = &c[i * self.rank + j];
                    if !cij.is_zero() && !f.is_zero() {
                        *o = core::mem::replace(o, TrigPoly::zero(self.dim)) + &(cij * f);
                    }
                }
            }
        }
        Ok(out)
    }
}

/// Substitutes the assignment into every coefficient of `l`.
pub fn instantiate(l: &OperatorNF, a: &Assignment) -> Result<ConcreteOperator> {
    if l.has_coordinates() {
        return Err(Error::CoordinateOnTorus);
    }
    let mut terms = BTreeMap::new();
    for (alpha, m) in l.terms() {
        let entries = m.entries().iter().map(|p| a.eval(p)).collect::<Result<Vec<_>>>()?;
        terms.insert(alpha, entries);
    }
    Ok(ConcreteOperator { dim: l.dim(), rank: l.rank(), terms })
}

/// Integral over the torus in units of `(2 pi)^n`.
pub fn torus_integral(f: &TrigPoly) -> Rational {
    f.integral()
}

/// Standard fiber pairing `sum_i sigma_i tau_i`.
pub fn pairing(sigma: &[TrigPoly], tau: &[TrigPoly]) -> TrigPoly {
    let dim = sigma.first().map_or(1, TrigPoly::dim);
    sigma.iter().zip(tau).fold(TrigPoly::zero(dim), |acc, (s, t)| acc + &(s * t))
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Trial {
    pub index: u64,
    /// `int <sigma, L tau> - int <L* sigma, tau>` in units of `(2 pi)^n`.
    pub delta: Rational,
}

impl Trial {
    pub fn passed(&self) -> bool {
        self.delta.is_zero()
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct AdjointReport {
    pub seed: u64,
    pub dim: usize,
    pub trials: Vec<Trial>,
}

impl AdjointReport {
    pub fn passed(&self) -> bool {
        self.trials.iter().all(Trial::passed)
    }
}

/// The generator of trial `index` under `seed`; each trial is a pure
/// function of the pair.
pub fn trial_rng(seed: u64, index: u64) -> ChaCha8Rng {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(index);
    rng
}

/// Runs one trial of the pairing identity for a claimed adjoint `l_star`.
pub fn run_trial(l: &OperatorNF, l_star: &OperatorNF, seed: u64, index: u64, params: &OracleParams) -> Result<Trial> {
    let mut rng = trial_rng(seed, index);
    let a = Assignment::random_for(&[l, l_star], params, &mut rng)?;
    let (lc, lsc) = (instantiate(l, &a)?, instantiate(l_star, &a)?);
    let sigma: Vec<TrigPoly> = (0..l.rank()).map(|_| random_trig(&mut rng, l.dim(), params)).collect();
    let tau: Vec<TrigPoly> = (0..l.rank()).map(|_| random_trig(&mut rng, l.dim(), params)).collect();
    let lhs = torus_integral(&pairing(&sigma, &lc.apply(&tau)?));
    let rhs = torus_integral(&pairing(&lsc.apply(&sigma)?, &tau));
    Ok(Trial { index, delta: lhs - rhs })
}

/// Checks `int <sigma, L tau> = int <L* sigma, tau>` for a claimed adjoint.
pub fn check_adjoint_pair(l: &OperatorNF, l_star: &OperatorNF, trials: u64, seed: u64, params: &OracleParams) -> Result<AdjointReport> {
    let trials = (0..trials).map(|i| run_trial(l, l_star, seed, i, params)).collect::<Result<Vec<_>>>()?;
    Ok(AdjointReport { seed, dim: l.dim(), trials })
}

/// Checks the pairing identity for the computed formal adjoint of `l`.
pub fn check_adjoint_identity(l: &OperatorNF, trials: u64, seed: u64, params: &OracleParams) -> Result<AdjointReport> {
    check_adjoint_pair(l, &l.adjoint(), trials, seed, params)
}
