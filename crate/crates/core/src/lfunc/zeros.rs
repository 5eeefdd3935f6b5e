use num_complex::Complex;
use rayon::prelude::*;
use serde::Serialize;

use super::eval::LEvaluator;
use super::ComplexPoint;
use crate::bounds::{region::zero_free_widths, EnvelopeConfig};
use crate::characters::DirichletCharacter;
use crate::error::{domain, Result};
use crate::scalar::Real;

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct Rectangle<T> {
    pub sigma_min: T,
    pub sigma_max: T,
    pub t_min: T,
    pub t_max: T,
}

#[derive(Debug, Clone, PartialEq)]
pub struct ScanOptions<T> {
    /// Accuracy of each grid evaluation.
    pub target: T,
    /// Grid minima below this are refined.
    pub candidate_threshold: T,
    /// Central-difference step for Newton's derivative.
    pub newton_step: T,
    pub newton_iterations: usize,
}

impl<T: Real> Default for ScanOptions<T> {
    fn default() -> Self {
        Self {
            target: T::lit(1e-10),
            candidate_threshold: T::lit(0.05),
            newton_step: T::lit(1e-6),
            newton_iterations: 60,
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct ZeroScanReport<T> {
    pub rectangle: Rectangle<T>,
    pub grid: (usize, usize),
    pub min_abs_l: T,
    pub argmin: ComplexPoint<T>,
    pub zeros_found: Vec<ComplexPoint<T>>,
    /// Zero-free width at the top of the rectangle under the default
    /// constants (`None` for `q < 3`).
    pub vartheta_used: Option<T>,
    /// Grid points whose evaluation failed.
    pub failed_points: usize,
}

fn axis<T: Real>(lo: T, hi: T, n: usize) -> Vec<T> {
    if n == 1 {
        return vec![lo];
    }
    (0..n).map(|i| lo + (hi - lo) * T::of_u64(i as u64) / T::of_u64(n as u64 - 1)).collect()
}

/// Scans `|L(s, χ)|` on a grid over `rect`, refining local minima below the
/// candidate threshold by Newton's method.
pub fn zero_scan<T: Real>(
    chi: &DirichletCharacter,
    rect: Rectangle<T>,
    grid: (usize, usize),
    refine_tol: T,
    opts: &ScanOptions<T>,
) -> Result<ZeroScanReport<T>> {
    let (ns, nt) = grid;
    if ns == 0 || nt == 0 {
        return domain("grid needs at least one point per axis");
    }
    if !(rect.sigma_min <= rect.sigma_max) || !(rect.t_min <= rect.t_max) {
        return domain("rectangle bounds are reversed");
    }
    let ev = LEvaluator::new(chi);
    // validate the corner; interior points inherit σ ≥ σ_min
    let corner = ComplexPoint::new(rect.sigma_min, rect.t_min);
    ev.evaluate(corner, opts.target)?;

    let sigmas = axis(rect.sigma_min, rect.sigma_max, ns);
    let ts = axis(rect.t_min, rect.t_max, nt);
    let values: Vec<Option<T>> = (0..ns * nt)
        .into_par_iter()
        .map(|k| {
            let s = ComplexPoint::new(sigmas[k / nt], ts[k % nt]);
            ev.evaluate(s, opts.target).ok().map(|e| e.value.norm())
        })
        .collect();
    let failed_points = values.iter().filter(|v| v.is_none()).count();

    let mut min_abs_l = T::infinity();
    let mut argmin = corner;
    for (k, v) in values.iter().enumerate() {
        if let Some(v) = *v {
            if v < min_abs_l {
                min_abs_l = v;
                argmin = ComplexPoint::new(sigmas[k / nt], ts[k % nt]);
            }
        }
    }

    let at = |i: isize, j: isize| -> Option<T> {
        if i < 0 || j < 0 || i as usize >= ns || j as usize >= nt {
            return None;
        }
        values[i as usize * nt + j as usize]
    };
    let mut candidates = Vec::new();
    for i in 0..ns as isize {
        for j in 0..nt as isize {
            let Some(v) = at(i, j) else { continue };
            if v >= opts.candidate_threshold {
                continue;
            }
            let is_min = (-1..=1)
                .flat_map(|di| (-1..=1).map(move |dj| (di, dj)))
                .filter(|&d| d != (0, 0))
                .all(|(di, dj)| at(i + di, j + dj).is_none_or(|w| v <= w));
            if is_min {
                candidates.push(ComplexPoint::new(sigmas[i as usize], ts[j as usize]));
            }
        }
    }

    let refined: Vec<Option<ComplexPoint<T>>> =
        candidates.par_iter().map(|&c| newton(&ev, c, refine_tol, opts)).collect();
    let mut zeros_found: Vec<ComplexPoint<T>> = Vec::new();
    let dedupe = T::lit(1e-6);
    for z in refined.into_iter().flatten() {
        if zeros_found.iter().all(|w| (w.s() - z.s()).norm() > dedupe) {
            zeros_found.push(z);
        }
    }

    let q = chi.modulus();
    let vartheta_used = if q >= 3 {
        let cfg = EnvelopeConfig::<T>::default();
        let core = T::of_u64(chi.structure().modulus().core());
        let height = rect.t_min.abs().max(rect.t_max.abs());
        zero_free_widths(T::of_u64(q), core, height, &cfg).ok().map(|w| w.width)
    } else {
        None
    };

    Ok(ZeroScanReport { rectangle: rect, grid, min_abs_l, argmin, zeros_found, vartheta_used, failed_points })
}

fn newton<T: Real>(ev: &LEvaluator<T>, start: ComplexPoint<T>, tol: T, opts: &ScanOptions<T>) -> Option<ComplexPoint<T>> {
    let h = opts.newton_step;
    let l = |z: Complex<T>| ev.evaluate(z.into(), opts.target).ok().map(|e| e.value);
    let mut z = start.s();
    for _ in 0..opts.newton_iterations {
        let f = l(z)?;
        if f.norm() < tol {
            return Some(z.into());
        }
        let hz = Complex::new(h, T::zero());
        let d = (l(z + hz)? - l(z - hz)?) / (hz * T::lit(2.0));
        if d.norm() == T::zero() {
            return None;
        }
        z = z - f / d;
    }
    let f = l(z)?;
    (f.norm() < tol).then(|| z.into())
}
