//! Transport check for handlebodies: the first-order part `f'` of a handle-slide
//! relation against the divergence of the matching Hamiltonian field.

use std::fmt::Write as _;

use num_complex::Complex64;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

use crate::error::{CalibrationError, SkeinError};
use crate::ring::DualScalar;
use crate::skein::{build_handle_slide, evaluate, resolve_dual, HandleGeometry, SkeinElement};
use crate::sl2::{crossing_contribution, divergence, eval_letters, Representation, Sl2};
use crate::words::GroupWord;

/// Candidate values for the normalisation constant `kappa`.
pub const KAPPA_CANDIDATES: [f64; 10] = [1.0, -1.0, 0.5, -0.5, 2.0, -2.0, 0.25, -0.25, 4.0, -4.0];

/// Tolerance used when fitting `kappa`.
pub const CALIBRATION_TOL: f64 = 1e-8;

/// Resolved handle-slide difference, reusable across representations.
#[derive(Clone, Debug)]
pub struct PreparedHandle {
    pub word: GroupWord,
    pub gen: usize,
    pub occ: usize,
    pub crossings: usize,
    pub geometry: HandleGeometry,
    diff: SkeinElement<DualScalar>,
}

impl PreparedHandle {
    pub fn new(w: &GroupWord, gen: usize, occ: usize) -> Result<Self, SkeinError> {
        let hs = build_handle_slide(w, gen, occ, None)?;
        let diff = &resolve_dual(&hs.sum)? - &resolve_dual(&hs.plain)?;
        Ok(Self {
            word: w.clone(),
            gen,
            occ,
            crossings: hs.sum.crossing_count(),
            geometry: hs.geometry,
            diff,
        })
    }

    /// `f + e f'` at `rho`.
    pub fn expand(&self, rho: &Representation) -> Result<DualScalar, SkeinError> {
        Ok(evaluate(&self.diff, rho)?)
    }

    /// Divergence of the word read from the band point.
    pub fn divergence(&self, rho: &Representation) -> Result<Complex64, SkeinError> {
        Ok(divergence(&self.geometry.based_word(), rho, self.gen)?)
    }

    /// Per-crossing sum: each cut splits the based loop into `G1 G2` and
    /// contributes `sign * (tr(G2 G1) + 2 tr(G2 G1^-1))`.
    pub fn fprime_closed_form(&self, rho: &Representation) -> Result<Complex64, SkeinError> {
        let letters = &self.geometry.rotated;
        let mut acc = Complex64::new(0.0, 0.0);
        for &(pos, sign) in &self.geometry.cuts {
            let g1: Sl2 = eval_letters(&letters[..pos], rho)?;
            let g2: Sl2 = eval_letters(&letters[pos..], rho)?;
            acc += crossing_contribution(&g2, &g1, sign);
        }
        Ok(acc)
    }
}

/// `(f, f')` of `[gamma # gamma_gen] - [gamma]` at `rho`.
pub fn f_and_fprime(
    w: &GroupWord,
    gen: usize,
    occ: usize,
    rho: &Representation,
) -> Result<(Complex64, Complex64), SkeinError> {
    let v = PreparedHandle::new(w, gen, occ)?.expand(rho)?;
    Ok((v.value, v.deriv))
}

pub fn fprime_closed_form(
    w: &GroupWord,
    gen: usize,
    occ: usize,
    rho: &Representation,
) -> Result<Complex64, SkeinError> {
    if w.occurrences(gen).is_empty() {
        return Ok(Complex64::new(0.0, 0.0));
    }
    PreparedHandle::new(w, gen, occ)?.fprime_closed_form(rho)
}

#[derive(Clone, Debug, Serialize)]
pub struct TransportReport {
    pub word: GroupWord,
    pub gen: usize,
    pub occ: usize,
    pub sample: usize,
    pub f_value: Complex64,
    pub f_prime: Complex64,
    pub divergence: Complex64,
    pub residual: Complex64,
    pub kappa: f64,
    /// `1 + |f'| + |div|`
    pub scale: f64,
}

impl TransportReport {
    pub fn relative_residual(&self) -> f64 {
        self.residual.norm() / self.scale
    }

    pub fn passes(&self, tol: f64) -> bool {
        self.relative_residual() < tol && self.f_value.norm() < tol.min(1e-9) * self.scale
    }
}

fn report(
    w: &GroupWord,
    gen: usize,
    occ: usize,
    sample: usize,
    fv: DualScalar,
    div: Complex64,
    kappa: f64,
) -> TransportReport {
    TransportReport {
        word: w.clone(),
        gen,
        occ,
        sample,
        f_value: fv.value,
        f_prime: fv.deriv,
        divergence: div,
        residual: fv.deriv + div * (2.0 * kappa),
        kappa,
        scale: 1.0 + fv.deriv.norm() + div.norm(),
    }
}

/// `f' + 2 kappa div`. A word without occurrences of `t_gen` gives the vacuous
/// all-zero report.
pub fn transport_residual(
    w: &GroupWord,
    gen: usize,
    occ: usize,
    rho: &Representation,
    kappa: f64,
    sample: usize,
) -> Result<TransportReport, SkeinError> {
    if w.occurrences(gen).is_empty() {
        rho.image(gen)?;
        return Ok(report(w, gen, occ, sample, DualScalar::scalar(0.0.into()), 0.0.into(), kappa));
    }
    let prepared = PreparedHandle::new(w, gen, occ)?;
    prepared_residual(&prepared, rho, kappa, sample)
}

pub fn prepared_residual(
    prepared: &PreparedHandle,
    rho: &Representation,
    kappa: f64,
    sample: usize,
) -> Result<TransportReport, SkeinError> {
    let fv = prepared.expand(rho)?;
    let div = prepared.divergence(rho)?;
    Ok(report(&prepared.word, prepared.gen, prepared.occ, sample, fv, div, kappa))
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct CalibrationCase {
    pub f_prime: Complex64,
    pub divergence: Complex64,
}

impl CalibrationCase {
    fn residual(&self, kappa: f64) -> f64 {
        (self.f_prime + self.divergence * (2.0 * kappa)).norm()
            / (1.0 + self.f_prime.norm() + self.divergence.norm())
    }
}

/// Pick the candidate with the smallest worst-case relative residual; it must
/// bring every case under `tol`.
pub fn calibrate_kappa(cases: &[CalibrationCase], tol: f64) -> Result<f64, CalibrationError> {
    if cases.is_empty() {
        return Err(CalibrationError::NoCases);
    }
    if cases.iter().all(|c| c.f_prime.norm() <= tol) {
        return Err(CalibrationError::Degenerate);
    }
    let worst = |k: f64| cases.iter().map(|c| c.residual(k)).fold(0.0, f64::max);
    let (best, best_err) = KAPPA_CANDIDATES
        .iter()
        .map(|&k| (k, worst(k)))
        .min_by(|a, b| a.1.total_cmp(&b.1))
        .expect("nonempty candidates");
    if best_err < tol {
        return Ok(best);
    }
    let mut table = String::from("case        f'                      div                    ");
    for k in KAPPA_CANDIDATES {
        let _ = write!(table, " k={:<6}", k);
    }
    for (i, c) in cases.iter().enumerate() {
        let _ = write!(table, "\n{:<4} {:>24.6e} {:>24.6e}", i, c.f_prime, c.divergence);
        for k in KAPPA_CANDIDATES {
            let _ = write!(table, " {:>8.1e}", c.residual(k));
        }
    }
    Err(CalibrationError::NoFit { table })
}

/// Genus-1 calibration data: powers of `a`, every occurrence, at the identity
/// and at fixed pseudo-random points.
pub fn genus1_calibration_cases() -> Result<Vec<CalibrationCase>, SkeinError> {
    let mut rng = ChaCha8Rng::seed_from_u64(0x6b61_7070_61);
    let mut reps = vec![Representation::new(vec![Sl2::identity()])];
    reps.extend((0..4).map(|_| Representation::random(&mut rng, 1)));
    let mut cases = Vec::new();
    for n in 1..=4 {
        let w = GroupWord::new(std::iter::repeat_n(crate::words::Letter::new(1, false), n));
        for occ in 0..n {
            let prepared = PreparedHandle::new(&w, 1, occ)?;
            for rho in &reps {
                cases.push(CalibrationCase {
                    f_prime: prepared.expand(rho)?.deriv,
                    divergence: prepared.divergence(rho)?,
                });
            }
        }
    }
    Ok(cases)
}

/// Errors from fitting the frozen constant.
#[derive(Debug, thiserror::Error)]
pub enum KappaError {
    #[error(transparent)]
    Skein(#[from] SkeinError),
    #[error(transparent)]
    Calibration(#[from] CalibrationError),
}

/// `kappa` fitted once on the genus-1 data.
pub fn frozen_kappa() -> Result<f64, KappaError> {
    Ok(calibrate_kappa(&genus1_calibration_cases()?, CALIBRATION_TOL)?)
}
