//! Lovász theta with certified intervals.
//!
//! The SDP is solved in floating point; the reported interval is then
//! certified from the iterates: the dual slack is shifted by its most
//! negative eigenvalue (upper end) and the primal matrix is projected back
//! onto the feasible set (lower end).

mod sdp;

use nalgebra::{DMatrix, RealField};
use num_traits::ToPrimitive;
use serde::Serialize;

use crate::error::{domain, Error, Result};
use crate::graph::Graph;
use crate::minrank::fixture::validate_fixture;

use sdp::{SdpOutcome, ThetaSdp};

/// Scalar the SDP runs on.
pub trait Real: RealField + Copy + ToPrimitive {}
impl<T: RealField + Copy + ToPrimitive> Real for T {}

pub const MAX_THETA_VERTICES: usize = 64;
pub const MIN_TOLERANCE: f64 = 1e-9;
pub const MAX_TOLERANCE: f64 = 1e-3;
pub const ITERATION_CAP: usize = 200;

/// Dual witness: `t I + Σ y_ij E_ij - J ⪰ 0` with `t` the certified upper
/// end. Multipliers are indexed like `Graph::edges`.
#[derive(Clone, Debug)]
pub struct ThetaDual<T> {
    pub t: T,
    pub edge_multipliers: Vec<T>,
}

#[derive(Clone, Debug)]
pub struct ThetaResult<T> {
    pub value: T,
    pub lower: T,
    pub upper: T,
    pub tolerance: f64,
    /// False when the iteration cap or a numerical breakdown stopped the
    /// solver early; the interval is still valid, only wider.
    pub converged: bool,
    pub iterations: usize,
    /// Feasible primal matrix with `⟨J, X⟩ >= lower`.
    pub primal: DMatrix<T>,
    pub dual: ThetaDual<T>,
}

impl<T: Real> ThetaResult<T> {
    pub fn interval(&self) -> ThetaInterval {
        ThetaInterval {
            lower: self.lower.to_f64().unwrap_or(f64::NEG_INFINITY),
            upper: self.upper.to_f64().unwrap_or(f64::INFINITY),
        }
    }
}

/// Closed interval known to contain ϑ.
#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct ThetaInterval {
    pub lower: f64,
    pub upper: f64,
}

impl ThetaInterval {
    pub fn width(&self) -> f64 {
        self.upper - self.lower
    }

    pub fn midpoint(&self) -> f64 {
        0.5 * (self.lower + self.upper)
    }

    pub fn contains(&self, v: f64, slack: f64) -> bool {
        self.lower - slack <= v && v <= self.upper + slack
    }

    pub fn add(&self, other: &ThetaInterval) -> ThetaInterval {
        ThetaInterval {
            lower: self.lower + other.lower,
            upper: self.upper + other.upper,
        }
    }

    pub fn scale(&self, k: f64) -> ThetaInterval {
        ThetaInterval {
            lower: self.lower * k,
            upper: self.upper * k,
        }
    }
}

fn c<T: Real>(x: f64) -> T {
    nalgebra::convert(x)
}

fn check_tolerance(tolerance: f64) -> Result<()> {
    if !(MIN_TOLERANCE..=MAX_TOLERANCE).contains(&tolerance) {
        return Err(domain(format!(
            "tolerance {tolerance} outside [{MIN_TOLERANCE}, {MAX_TOLERANCE}]"
        )));
    }
    Ok(())
}

/// ϑ(g) on scalar `T`. The interval has width at most `2 * tolerance` when
/// `converged` is set.
pub fn lovasz_theta_with<T: Real>(g: &Graph, tolerance: f64) -> Result<ThetaResult<T>> {
    check_tolerance(tolerance)?;
    if g.n() > MAX_THETA_VERTICES {
        return Err(Error::SizeLimit {
            what: "vertex count for the theta SDP",
            actual: g.n(),
            limit: MAX_THETA_VERTICES,
        });
    }
    let edges: Vec<(usize, usize)> = g.edges().collect();
    let problem = ThetaSdp {
        n: g.n(),
        edges: &edges,
    };
    let mut best: Option<Certified<T>> = None;
    let mut iterations = 0;
    problem.solve::<T>(0.5 * tolerance, ITERATION_CAP, |out| {
        iterations = out.iterations;
        let cert = certify(&problem, out);
        let width = cert.width();
        if best.as_ref().is_none_or(|b| width < b.width()) {
            best = Some(cert);
        }
        width <= 2.0 * tolerance
    });
    let Certified { lower, upper, x, y } = match best {
        Some(b) => b,
        None => certify(&problem, &problem.start::<T>()),
    };
    let converged = (upper - lower).to_f64().unwrap_or(f64::INFINITY) <= 2.0 * tolerance;
    if !converged {
        log::warn!(
            "theta SDP on {} vertices stopped after {} iterations with width {:e}",
            g.n(),
            iterations,
            (upper - lower).to_f64().unwrap_or(f64::NAN)
        );
    }
    Ok(ThetaResult {
        value: (lower + upper) * c(0.5),
        lower,
        upper,
        tolerance,
        converged,
        iterations,
        primal: x,
        dual: ThetaDual {
            t: upper,
            edge_multipliers: y,
        },
    })
}

struct Certified<T> {
    lower: T,
    upper: T,
    x: DMatrix<T>,
    y: Vec<T>,
}

impl<T: Real> Certified<T> {
    fn width(&self) -> f64 {
        (self.upper - self.lower).to_f64().unwrap_or(f64::INFINITY)
    }
}

/// Interval implied by one iterate, with rounding margins.
fn certify<T: Real>(problem: &ThetaSdp, out: &SdpOutcome<T>) -> Certified<T> {
    let n = problem.n as f64;
    let eps = T::default_epsilon();

    let z = problem.slack(out.t, &out.y);
    let z_min = z.symmetric_eigenvalues().min();
    let z_margin = eps * c(8.0 * n) * (z.norm() + T::one());
    let upper = out.t + (-z_min).max(T::zero()) + z_margin;

    let mut x = out.x.clone();
    for &(i, j) in problem.edges {
        x[(i, j)] = T::zero();
        x[(j, i)] = T::zero();
    }
    let x_min = x.symmetric_eigenvalues().min();
    let x_margin = eps * c(8.0 * n) * (x.norm() + T::one());
    if x_min < x_margin {
        let shift = x_margin - x_min;
        for i in 0..problem.n {
            x[(i, i)] += shift;
        }
    }
    let tr = x.trace();
    x /= tr;
    let lower = x.sum() - eps * c(4.0 * n * n);
    Certified {
        lower,
        upper,
        x,
        y: out.y.clone(),
    }
}

/// ϑ(g) in double precision.
pub fn lovasz_theta(g: &Graph, tolerance: f64) -> Result<ThetaResult<f64>> {
    lovasz_theta_with(g, tolerance)
}

/// ϑ as the sum over connected components, for graphs of any size whose
/// components have at most 64 vertices.
pub fn theta_by_components(g: &Graph, tolerance: f64) -> Result<ThetaInterval> {
    let mut total = ThetaInterval {
        lower: 0.0,
        upper: 0.0,
    };
    for comp in g.components() {
        let sub = g.induced_subgraph(&comp)?;
        total = total.add(&lovasz_theta(&sub, tolerance)?.interval());
    }
    Ok(total)
}

/// `n cos(π/n) / (1 + cos(π/n))` for odd `n >= 3`.
pub fn theta_odd_cycle(n: usize) -> Result<f64> {
    if n < 3 || n.is_multiple_of(2) {
        return Err(domain(format!("closed form needs an odd n >= 3, got {n}")));
    }
    let cs = (std::f64::consts::PI / n as f64).cos();
    Ok(n as f64 * cs / (1.0 + cs))
}

/// ϑ of the modified Schläfli graph; rejects graphs that fail fixture
/// validation.
pub fn theta_modified_schlafli_check(g: &Graph, tolerance: f64) -> Result<ThetaResult<f64>> {
    let report = validate_fixture(g)?;
    if !report.is_valid() {
        return Err(domain(format!(
            "not the modified Schläfli fixture: {}",
            report.violations.join("; ")
        )));
    }
    lovasz_theta(g, tolerance)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn assert_near(r: &ThetaResult<f64>, want: f64, tol: f64) {
        assert!(r.converged, "not converged: [{}, {}]", r.lower, r.upper);
        assert!(
            r.lower <= want + 1e-12 && want <= r.upper + 1e-12,
            "{want} not in [{}, {}]",
            r.lower,
            r.upper
        );
        assert!(r.upper - r.lower <= 2.0 * tol);
    }

    #[test]
    fn small_graphs() {
        let tol = 1e-7;
        assert_near(
            &lovasz_theta(&Graph::complete(4).unwrap(), tol).unwrap(),
            1.0,
            tol,
        );
        assert_near(
            &lovasz_theta(&Graph::empty(3).unwrap(), tol).unwrap(),
            3.0,
            tol,
        );
        assert_near(
            &lovasz_theta(&Graph::empty(1).unwrap(), tol).unwrap(),
            1.0,
            tol,
        );
        assert_near(
            &lovasz_theta(&Graph::cycle(5).unwrap(), tol).unwrap(),
            5f64.sqrt(),
            tol,
        );
        assert_near(
            &lovasz_theta(&Graph::path(4).unwrap(), tol).unwrap(),
            2.0,
            tol,
        );
    }

    #[test]
    fn odd_cycles_match_closed_form() {
        for n in [3, 5, 7, 9, 11, 13] {
            let want = theta_odd_cycle(n).unwrap();
            assert_near(
                &lovasz_theta(&Graph::cycle(n).unwrap(), 1e-8).unwrap(),
                want,
                1e-8,
            );
        }
        assert!((theta_odd_cycle(3).unwrap() - 1.0).abs() < 1e-15);
        assert!((theta_odd_cycle(7).unwrap() - 3.317_667_2).abs() < 1e-6);
        assert!(theta_odd_cycle(6).is_err());
    }

    #[test]
    fn single_precision_runs() {
        let r = lovasz_theta_with::<f32>(&Graph::cycle(5).unwrap(), 1e-3).unwrap();
        assert!(r.lower <= 5f32.sqrt() + 1e-4 && 5f32.sqrt() <= r.upper + 1e-4);
    }

    #[test]
    fn rejects_bad_input() {
        assert!(lovasz_theta(&Graph::cycle(5).unwrap(), 1e-2).is_err());
        assert!(lovasz_theta(&Graph::empty(65).unwrap(), 1e-6).is_err());
        let g = Graph::schlafli_complement();
        assert!(theta_modified_schlafli_check(&g, 1e-6).is_err());
    }

    #[test]
    fn primal_witness_is_feasible() {
        let g = Graph::cycle(7).unwrap();
        let r = lovasz_theta(&g, 1e-8).unwrap();
        let x = &r.primal;
        assert!((x.trace() - 1.0).abs() < 1e-9);
        for (i, j) in g.edges() {
            assert_eq!(x[(i, j)], 0.0);
        }
        assert!((x - x.transpose()).norm() < 1e-12);
        assert!(x.symmetric_eigenvalues().min() >= -1e-9);
        assert!((x.sum() - r.lower).abs() < 1e-9);
    }
}
