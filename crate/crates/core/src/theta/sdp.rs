//! Primal-dual interior point for the theta SDP
//!
//! ```text
//! max ⟨J, X⟩  s.t.  tr X = 1,  X_ij + X_ji = 0 for ij ∈ E,  X ⪰ 0
//! min t       s.t.  Z = t I + Σ y_ij E_ij - J ⪰ 0
//! ```
//!
//! HKM search direction with a Mehrotra predictor-corrector. Both sides
//! start strictly feasible (`X = I/n`, `t = n + 1`, `y = 0`), so the
//! iteration only has to close the duality gap.

use nalgebra::{DMatrix, DVector};

use super::Real;

fn c<T: Real>(x: f64) -> T {
    nalgebra::convert(x)
}

pub(crate) struct SdpOutcome<T> {
    pub x: DMatrix<T>,
    pub t: T,
    pub y: Vec<T>,
    pub iterations: usize,
}

pub(crate) struct ThetaSdp<'a> {
    pub n: usize,
    pub edges: &'a [(usize, usize)],
}

impl ThetaSdp<'_> {
    fn m(&self) -> usize {
        1 + self.edges.len()
    }

    /// `A(Y)`: trace, then `Y_ij + Y_ji` per edge.
    fn apply<T: Real>(&self, y: &DMatrix<T>) -> DVector<T> {
        let mut out = DVector::zeros(self.m());
        out[0] = y.trace();
        for (k, &(i, j)) in self.edges.iter().enumerate() {
            out[k + 1] = y[(i, j)] + y[(j, i)];
        }
        out
    }

    /// `Σ v_k A_k`.
    fn adjoint<T: Real>(&self, v: &DVector<T>) -> DMatrix<T> {
        let mut out = DMatrix::identity(self.n, self.n) * v[0];
        for (k, &(i, j)) in self.edges.iter().enumerate() {
            out[(i, j)] += v[k + 1];
            out[(j, i)] += v[k + 1];
        }
        out
    }

    /// Dual slack `t I + Σ y E - J`.
    pub fn slack<T: Real>(&self, t: T, y: &[T]) -> DMatrix<T> {
        let mut v = DVector::zeros(self.m());
        v[0] = t;
        for (k, &yk) in y.iter().enumerate() {
            v[k + 1] = yk;
        }
        self.adjoint(&v) - DMatrix::from_element(self.n, self.n, T::one())
    }

    /// Schur complement `M_kl = tr(A_k X A_l Z⁻¹)`.
    fn schur<T: Real>(&self, x: &DMatrix<T>, zi: &DMatrix<T>) -> DMatrix<T> {
        let m = self.m();
        let mut s = DMatrix::zeros(m, m);
        let xz = x * zi;
        s[(0, 0)] = x.component_mul(zi).sum();
        for (k, &(p, q)) in self.edges.iter().enumerate() {
            let v = xz[(p, q)] + xz[(q, p)];
            s[(0, k + 1)] = v;
            s[(k + 1, 0)] = v;
        }
        for (a, &(i, j)) in self.edges.iter().enumerate() {
            for (b, &(p, q)) in self.edges.iter().enumerate().skip(a) {
                let v = x[(j, p)] * zi[(q, i)]
                    + x[(j, q)] * zi[(p, i)]
                    + x[(i, p)] * zi[(q, j)]
                    + x[(i, q)] * zi[(p, j)];
                s[(a + 1, b + 1)] = v;
                s[(b + 1, a + 1)] = v;
            }
        }
        s
    }

    /// Strictly feasible starting point.
    pub fn start<T: Real>(&self) -> SdpOutcome<T> {
        let nf: T = c(self.n as f64);
        SdpOutcome {
            x: DMatrix::identity(self.n, self.n) / nf,
            t: nf + T::one(),
            y: vec![T::zero(); self.edges.len()],
            iterations: 0,
        }
    }

    /// Runs until `t - ⟨J, X⟩ <= gap_target`, `max_iter` is reached or
    /// `visit` returns true. `visit` sees every iterate after the first.
    pub fn solve<T: Real>(
        &self,
        gap_target: f64,
        max_iter: usize,
        mut visit: impl FnMut(&SdpOutcome<T>) -> bool,
    ) {
        let n = self.n;
        let nf: T = c(n as f64);
        let SdpOutcome::<T> {
            mut x,
            mut t,
            mut y,
            ..
        } = self.start();
        let mut z = self.slack(t, &y);
        let mut b = DVector::zeros(self.m());
        b[0] = T::one();
        let ones = DMatrix::from_element(n, n, T::one());
        let mut iterations = 0;
        while iterations < max_iter {
            let gap: T = t - x.sum();
            if gap.to_f64().unwrap_or(f64::NAN) <= gap_target {
                break;
            }
            iterations += 1;
            let Some(zc) = z.clone().cholesky() else {
                log::debug!("dual slack lost definiteness at iteration {iterations}");
                break;
            };
            let zi = zc.inverse();
            // Near the optimum the Schur complement is too ill-conditioned
            // for Cholesky; pivoted LU still gives a usable direction.
            let schur = self.schur(&x, &zi);
            let solver = match schur.clone().cholesky() {
                Some(ch) => SchurSolver::Cholesky(ch),
                None => SchurSolver::Lu(schur.lu()),
            };
            let rp = &b - self.apply(&x);
            let mut yv = DVector::zeros(self.m());
            yv[0] = t;
            for (k, &yk) in y.iter().enumerate() {
                yv[k + 1] = yk;
            }
            let rd = &ones - self.adjoint(&yv) + &z;
            let xrdzi = &x * &rd * &zi;

            let direction = |mu: T, corr: Option<&DMatrix<T>>| {
                let mut target = &zi * mu - &x + &xrdzi;
                if let Some(r) = corr {
                    target -= r;
                }
                let rhs = self.apply(&target) - &rp;
                let dy = solver.solve(&rhs)?;
                let dz = self.adjoint(&dy) - &rd;
                let mut dx = &zi * mu - &x - &x * &dz * &zi;
                if let Some(r) = corr {
                    dx -= r;
                }
                let dx = (&dx + dx.transpose()) * c::<T>(0.5);
                Some((dx, dy, dz))
            };

            let mu = x.component_mul(&z).sum() / nf;
            let Some((dxa, _, dza)) = direction(T::zero(), None) else {
                log::debug!("singular Schur complement at iteration {iterations}");
                break;
            };
            let ap = max_step(&x, &dxa).min(T::one());
            let ad = max_step(&z, &dza).min(T::one());
            let mu_aff = (&x + &dxa * ap).component_mul(&(&z + &dza * ad)).sum() / nf;
            let ratio = (mu_aff / mu).to_f64().unwrap_or(1.0).clamp(0.0, 1.0);
            let sigma = ratio * ratio * ratio;
            let corr = &dxa * &dza * &zi;
            let Some((dx, dy, _)) = direction(mu * c(sigma), Some(&corr)) else {
                break;
            };
            let z_dir = self.adjoint(&dy) - &rd;
            let ap = (max_step(&x, &dx) * c(STEP_FACTOR)).min(T::one());
            let ad = (max_step(&z, &z_dir) * c(STEP_FACTOR)).min(T::one());
            x += &dx * ap;
            x = (&x + x.transpose()) * c::<T>(0.5);
            t += dy[0] * ad;
            for (k, yk) in y.iter_mut().enumerate() {
                *yk += dy[k + 1] * ad;
            }
            z = self.slack(t, &y);
            let out = SdpOutcome {
                x,
                t,
                y,
                iterations,
            };
            if visit(&out) {
                break;
            }
            SdpOutcome { x, t, y, .. } = out;
        }
    }
}

/// Fraction of the distance to the boundary taken per step.
const STEP_FACTOR: f64 = 0.98;

enum SchurSolver<T: Real> {
    Cholesky(nalgebra::Cholesky<T, nalgebra::Dyn>),
    Lu(nalgebra::LU<T, nalgebra::Dyn, nalgebra::Dyn>),
}

impl<T: Real> SchurSolver<T> {
    fn solve(&self, rhs: &DVector<T>) -> Option<DVector<T>> {
        match self {
            SchurSolver::Cholesky(ch) => Some(ch.solve(rhs)),
            SchurSolver::Lu(lu) => lu.solve(rhs),
        }
    }
}

/// Largest `a` with `m + a d ⪰ 0`, for positive definite `m`.
fn max_step<T: Real>(m: &DMatrix<T>, d: &DMatrix<T>) -> T {
    let big: T = c(1e30);
    let Some(ch) = m.clone().cholesky() else {
        return T::zero();
    };
    let l = ch.l();
    let Some(w1) = l.solve_lower_triangular(d) else {
        return T::zero();
    };
    let Some(w) = l.solve_lower_triangular(&w1.transpose()) else {
        return T::zero();
    };
    let w = (&w + w.transpose()) * c::<T>(0.5);
    let lmin = w.symmetric_eigenvalues().min();
    if lmin < T::zero() {
        (-T::one() / lmin).min(big)
    } else {
        big
    }
}
