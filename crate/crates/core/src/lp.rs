//! Exact linear programming with primal/dual certificates.
//!
//! Problems are `maximize c·x` subject to rows `a·x (<= | >=) b` and `x >= 0`.
//! The solver is a dense two-phase tableau simplex with Bland's rule, so it
//! terminates on degenerate problems. Every outcome carries a certificate
//! that [`verify_certificate`] checks without touching solver state.

use std::fmt::Write as _;

use num_rational::BigRational;
use serde::{Deserialize, Serialize};

use crate::error::{parse_err, Error, Result};
use crate::scalar::{format_rational, parse_rational, OrderedField};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub enum Relation {
    Le,
    Ge,
}

impl Relation {
    fn as_str(self) -> &'static str {
        match self {
            Relation::Le => "<=",
            Relation::Ge => ">=",
        }
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct Constraint<T> {
    pub coefficients: Vec<T>,
    pub relation: Relation,
    pub rhs: T,
}

/// `maximize objective·x` over `x >= 0` subject to `constraints`.
#[derive(Clone, Debug, PartialEq)]
pub struct LpProblem<T> {
    objective: Vec<T>,
    constraints: Vec<Constraint<T>>,
}

impl<T: OrderedField> LpProblem<T> {
    pub fn new(objective: Vec<T>, constraints: Vec<Constraint<T>>) -> Result<Self> {
        if constraints.is_empty() {
            return Err(Error::Dimension(
                "an LP needs at least one constraint".into(),
            ));
        }
        for (i, c) in constraints.iter().enumerate() {
            if c.coefficients.len() != objective.len() {
                return Err(Error::Dimension(format!(
                    "constraint {i} has {} coefficients, expected {}",
                    c.coefficients.len(),
                    objective.len()
                )));
            }
        }
        Ok(LpProblem {
            objective,
            constraints,
        })
    }

    pub fn num_vars(&self) -> usize {
        self.objective.len()
    }

    pub fn objective(&self) -> &[T] {
        &self.objective
    }

    pub fn constraints(&self) -> &[Constraint<T>] {
        &self.constraints
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub enum LpStatus {
    Optimal,
    Infeasible,
    Unbounded,
}

/// Solver outcome together with its proof.
///
/// * `Optimal`: `primal` and `dual` are feasible and both objectives equal
///   `objective`. Dual signs: `>= 0` on `<=` rows, `<= 0` on `>=` rows.
/// * `Infeasible`: `dual` is a Farkas vector `y` with the same sign pattern,
///   `yᵀA >= 0` and `yᵀb < 0`.
/// * `Unbounded`: `primal` is feasible and `ray` is a direction along which
///   the objective grows without leaving the feasible region.
#[derive(Clone, Debug, PartialEq)]
pub struct LpCertificate<T> {
    pub status: LpStatus,
    pub primal: Vec<T>,
    pub dual: Vec<T>,
    pub objective: T,
    pub ray: Option<Vec<T>>,
}

struct Tableau<T> {
    rows: Vec<Vec<T>>,
    /// Reduced costs `c_B B^-1 A_j - c_j`; last entry is the objective value.
    cost: Vec<T>,
    basis: Vec<usize>,
    n_cols: usize,
}

impl<T: OrderedField> Tableau<T> {
    fn pivot(&mut self, r: usize, c: usize) {
        let inv = self.rows[r][c].clone().inv();
        for v in self.rows[r].iter_mut() {
            *v = v.clone() * inv.clone();
        }
        let pivot_row = self.rows[r].clone();
        for (i, row) in self.rows.iter_mut().enumerate() {
            if i == r || row[c].is_zero_element() {
                continue;
            }
            let factor = row[c].clone();
            for (v, p) in row.iter_mut().zip(&pivot_row) {
                if !p.is_zero_element() {
                    *v = v.clone() - factor.clone() * p.clone();
                }
            }
        }
        if !self.cost[c].is_zero_element() {
            let factor = self.cost[c].clone();
            for (v, p) in self.cost.iter_mut().zip(&pivot_row) {
                if !p.is_zero_element() {
                    *v = v.clone() - factor.clone() * p.clone();
                }
            }
        }
        self.basis[r] = c;
    }

    /// Bland's rule. Returns the entering column that proved unboundedness,
    /// if any.
    fn run(&mut self, allowed: impl Fn(usize) -> bool) -> Option<usize> {
        loop {
            let c = (0..self.n_cols).find(|&j| allowed(j) && self.cost[j].is_negative())?;
            let rhs = self.n_cols;
            let mut best: Option<(usize, T)> = None;
            for (i, row) in self.rows.iter().enumerate() {
                if !row[c].is_positive() {
                    continue;
                }
                let ratio = row[rhs].clone() * row[c].clone().inv();
                let better = match &best {
                    None => true,
                    Some((bi, br)) => {
                        ratio < *br || (ratio == *br && self.basis[i] < self.basis[*bi])
                    }
                };
                if better {
                    best = Some((i, ratio));
                }
            }
            match best {
                Some((r, _)) => self.pivot(r, c),
                None => return Some(c),
            }
        }
    }
}

/// Solves `p` exactly. The returned certificate is re-verified; a failed
/// verification is reported as an error, never returned.
pub fn solve<T: OrderedField>(p: &LpProblem<T>) -> Result<LpCertificate<T>> {
    let cert = solve_unchecked(p);
    if !verify_certificate(p, &cert) {
        return Err(Error::Certificate(format!(
            "simplex produced an invalid {:?} certificate",
            cert.status
        )));
    }
    Ok(cert)
}

fn solve_unchecked<T: OrderedField>(p: &LpProblem<T>) -> LpCertificate<T> {
    let n = p.num_vars();
    let m = p.constraints.len();
    let zero = T::zero();
    let one = T::one();

    // Internal rows: sign * (a x) + s = sign * b, then negated when the rhs is
    // negative so that every rhs is nonnegative.
    let sign: Vec<T> = p
        .constraints
        .iter()
        .map(|c| match c.relation {
            Relation::Le => one.clone(),
            Relation::Ge => -one.clone(),
        })
        .collect();
    let flip: Vec<bool> = p
        .constraints
        .iter()
        .zip(&sign)
        .map(|(c, s)| (c.rhs.clone() * s.clone()).is_negative())
        .collect();
    let n_art = flip.iter().filter(|&&f| f).count();
    let n_cols = n + m + n_art;
    let mut rows = Vec::with_capacity(m);
    let mut basis = Vec::with_capacity(m);
    let mut art = n + m;
    for (i, c) in p.constraints.iter().enumerate() {
        let s = if flip[i] {
            -sign[i].clone()
        } else {
            sign[i].clone()
        };
        let mut row = vec![zero.clone(); n_cols + 1];
        for (j, a) in c.coefficients.iter().enumerate() {
            row[j] = a.clone() * s.clone();
        }
        row[n + i] = if flip[i] { -one.clone() } else { one.clone() };
        row[n_cols] = c.rhs.clone() * s;
        if flip[i] {
            row[art] = one.clone();
            basis.push(art);
            art += 1;
        } else {
            basis.push(n + i);
        }
        rows.push(row);
    }
    let mut t = Tableau {
        rows,
        cost: vec![zero.clone(); n_cols + 1],
        basis,
        n_cols,
    };

    let slack_duals = |t: &Tableau<T>| -> Vec<T> {
        (0..m)
            .map(|i| sign[i].clone() * t.cost[n + i].clone())
            .collect()
    };

    if n_art > 0 {
        // Phase 1: maximize -sum(artificials).
        for j in n + m..n_cols {
            t.cost[j] = one.clone();
        }
        for i in 0..m {
            if t.basis[i] >= n + m {
                let row = t.rows[i].clone();
                for (v, r) in t.cost.iter_mut().zip(&row) {
                    *v = v.clone() - r.clone();
                }
            }
        }
        t.run(|_| true);
        if t.cost[n_cols].is_negative() {
            let dual = slack_duals(&t);
            return LpCertificate {
                status: LpStatus::Infeasible,
                primal: Vec::new(),
                dual,
                objective: zero,
                ray: None,
            };
        }
        // Drive zero-valued artificials out of the basis where possible.
        for i in 0..m {
            if t.basis[i] >= n + m {
                if let Some(c) = (0..n + m).find(|&j| !t.rows[i][j].is_zero_element()) {
                    t.pivot(i, c);
                }
            }
        }
    }

    // Phase 2 objective in reduced-cost form.
    let mut cost = vec![zero.clone(); n_cols + 1];
    for (j, c) in p.objective.iter().enumerate() {
        cost[j] = -c.clone();
    }
    for i in 0..m {
        let b = t.basis[i];
        if b < n && !p.objective[b].is_zero_element() {
            let cb = p.objective[b].clone();
            for (v, r) in cost.iter_mut().zip(&t.rows[i]) {
                if !r.is_zero_element() {
                    *v = v.clone() + cb.clone() * r.clone();
                }
            }
        }
    }
    t.cost = cost;
    let unbounded = t.run(|j| j < n + m);

    let mut primal = vec![zero.clone(); n];
    for (i, &b) in t.basis.iter().enumerate() {
        if b < n {
            primal[b] = t.rows[i][n_cols].clone();
        }
    }
    if let Some(c) = unbounded {
        let mut ray = vec![zero.clone(); n];
        if c < n {
            ray[c] = one.clone();
        }
        for (i, &b) in t.basis.iter().enumerate() {
            if b < n {
                ray[b] = -t.rows[i][c].clone();
            }
        }
        let objective = dot(&p.objective, &primal);
        return LpCertificate {
            status: LpStatus::Unbounded,
            primal,
            dual: Vec::new(),
            objective,
            ray: Some(ray),
        };
    }
    LpCertificate {
        status: LpStatus::Optimal,
        dual: slack_duals(&t),
        objective: t.cost[n_cols].clone(),
        primal,
        ray: None,
    }
}

fn dot<T: OrderedField>(a: &[T], b: &[T]) -> T {
    a.iter()
        .zip(b)
        .fold(T::zero(), |acc, (x, y)| acc + x.clone() * y.clone())
}

fn dual_sign_ok<T: OrderedField>(rel: Relation, y: &T) -> bool {
    match rel {
        Relation::Le => !y.is_negative(),
        Relation::Ge => !y.is_positive(),
    }
}

fn primal_feasible<T: OrderedField>(p: &LpProblem<T>, x: &[T]) -> bool {
    x.len() == p.num_vars()
        && x.iter().all(|v| !v.is_negative())
        && p.constraints.iter().all(|c| {
            let lhs = dot(&c.coefficients, x);
            match c.relation {
                Relation::Le => lhs <= c.rhs,
                Relation::Ge => lhs >= c.rhs,
            }
        })
}

/// `yᵀA` column by column.
fn transpose_product<T: OrderedField>(p: &LpProblem<T>, y: &[T]) -> Vec<T> {
    (0..p.num_vars())
        .map(|j| {
            p.constraints.iter().zip(y).fold(T::zero(), |acc, (c, yi)| {
                acc + yi.clone() * c.coefficients[j].clone()
            })
        })
        .collect()
}

/// Checks a certificate against `p` using only the problem data.
pub fn verify_certificate<T: OrderedField>(p: &LpProblem<T>, c: &LpCertificate<T>) -> bool {
    let m = p.constraints.len();
    match c.status {
        LpStatus::Optimal => {
            if c.dual.len() != m || !primal_feasible(p, &c.primal) {
                return false;
            }
            let signs = p
                .constraints
                .iter()
                .zip(&c.dual)
                .all(|(con, y)| dual_sign_ok(con.relation, y));
            let reduced = transpose_product(p, &c.dual);
            let dual_feasible = signs && reduced.iter().zip(&p.objective).all(|(r, cj)| r >= cj);
            let primal_obj = dot(&p.objective, &c.primal);
            let rhs: Vec<T> = p.constraints.iter().map(|con| con.rhs.clone()).collect();
            let dual_obj = dot(&rhs, &c.dual);
            dual_feasible && primal_obj == c.objective && dual_obj == c.objective
        }
        LpStatus::Infeasible => {
            if c.dual.len() != m {
                return false;
            }
            let signs = p
                .constraints
                .iter()
                .zip(&c.dual)
                .all(|(con, y)| dual_sign_ok(con.relation, y));
            let combo = transpose_product(p, &c.dual);
            let rhs: Vec<T> = p.constraints.iter().map(|con| con.rhs.clone()).collect();
            signs && combo.iter().all(|v| !v.is_negative()) && dot(&rhs, &c.dual).is_negative()
        }
        LpStatus::Unbounded => {
            let Some(ray) = &c.ray else {
                return false;
            };
            if ray.len() != p.num_vars() || !primal_feasible(p, &c.primal) {
                return false;
            }
            let stays = p.constraints.iter().all(|con| {
                let d = dot(&con.coefficients, ray);
                match con.relation {
                    Relation::Le => !d.is_positive(),
                    Relation::Ge => !d.is_negative(),
                }
            });
            stays && ray.iter().all(|v| !v.is_negative()) && dot(&p.objective, ray).is_positive()
        }
    }
}

impl LpProblem<BigRational> {
    /// Text dump: a `max c…` line, then one `coef… REL rhs` line per row.
    pub fn to_text(&self) -> String {
        let join = |v: &[BigRational]| v.iter().map(format_rational).collect::<Vec<_>>().join(" ");
        let mut out = format!("max {}\n", join(&self.objective));
        for c in &self.constraints {
            let _ = writeln!(
                out,
                "{} {} {}",
                join(&c.coefficients),
                c.relation.as_str(),
                format_rational(&c.rhs)
            );
        }
        out
    }

    pub fn parse_text(text: &str) -> Result<Self> {
        let mut objective = None;
        let mut constraints = Vec::new();
        for (ln, line) in text.lines().enumerate() {
            let line = line.trim();
            if line.is_empty() || line.starts_with('#') {
                continue;
            }
            let parse_all = |toks: &[&str]| -> Result<Vec<BigRational>> {
                toks.iter()
                    .map(|t| parse_rational(t).map_err(|e| parse_err(ln + 1, e.to_string())))
                    .collect()
            };
            let toks: Vec<&str> = line.split_whitespace().collect();
            if toks[0] == "max" {
                objective = Some(parse_all(&toks[1..])?);
                continue;
            }
            let pos = toks
                .iter()
                .position(|t| *t == "<=" || *t == ">=")
                .ok_or_else(|| parse_err(ln + 1, "constraint needs <= or >="))?;
            if pos + 2 != toks.len() {
                return Err(parse_err(
                    ln + 1,
                    "expected a single rhs after the relation",
                ));
            }
            let relation = if toks[pos] == "<=" {
                Relation::Le
            } else {
                Relation::Ge
            };
            constraints.push(Constraint {
                coefficients: parse_all(&toks[..pos])?,
                relation,
                rhs: parse_all(&toks[pos + 1..])?.remove(0),
            });
        }
        let objective = objective.ok_or_else(|| parse_err(1, "missing `max` objective line"))?;
        LpProblem::new(objective, constraints)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::scalar::{int, rational};

    fn row(c: &[i64], rel: Relation, rhs: i64) -> Constraint<BigRational> {
        Constraint {
            coefficients: c.iter().map(|&v| int(v)).collect(),
            relation: rel,
            rhs: int(rhs),
        }
    }

    fn obj(c: &[i64]) -> Vec<BigRational> {
        c.iter().map(|&v| int(v)).collect()
    }

    #[test]
    fn single_variable() {
        let p = LpProblem::new(obj(&[1]), vec![row(&[1], Relation::Le, 1)]).unwrap();
        let c = solve(&p).unwrap();
        assert_eq!(c.status, LpStatus::Optimal);
        assert_eq!(c.objective, int(1));
        assert_eq!(c.dual, vec![int(1)]);
    }

    #[test]
    fn pentagon_edge_lp_is_five_halves() {
        let mut rows = Vec::new();
        for v in 0..5 {
            let mut a = vec![0; 5];
            a[v] = 1;
            a[(v + 1) % 5] = 1;
            rows.push(row(&a, Relation::Le, 1));
        }
        let p = LpProblem::new(obj(&[1; 5]), rows).unwrap();
        let c = solve(&p).unwrap();
        assert_eq!(c.objective, rational(5, 2));
    }

    #[test]
    fn hand_built_certificate_and_perturbation() {
        let mut rows = Vec::new();
        for v in 0..5 {
            let mut a = vec![0; 5];
            a[v] = 1;
            a[(v + 1) % 5] = 1;
            rows.push(row(&a, Relation::Le, 1));
        }
        let p = LpProblem::new(obj(&[1; 5]), rows).unwrap();
        let half = rational(1, 2);
        let mut cert = LpCertificate {
            status: LpStatus::Optimal,
            primal: vec![half.clone(); 5],
            dual: vec![half.clone(); 5],
            objective: rational(5, 2),
            ray: None,
        };
        assert!(verify_certificate(&p, &cert));
        cert.dual[2] = rational(1, 3);
        assert!(!verify_certificate(&p, &cert));
    }

    #[test]
    fn ge_rows_and_phase_one() {
        // min x + y s.t. x + 2y >= 4, 3x + y >= 6  → (8/5, 6/5), value 14/5.
        let p = LpProblem::new(
            obj(&[-1, -1]),
            vec![row(&[1, 2], Relation::Ge, 4), row(&[3, 1], Relation::Ge, 6)],
        )
        .unwrap();
        let c = solve(&p).unwrap();
        assert_eq!(c.status, LpStatus::Optimal);
        assert_eq!(c.objective, rational(-14, 5));
        assert_eq!(c.primal, vec![rational(8, 5), rational(6, 5)]);
        assert!(c.dual.iter().all(|y| *y <= int(0)));
    }

    #[test]
    fn infeasible_has_farkas_vector() {
        let p = LpProblem::new(
            obj(&[1, 1]),
            vec![row(&[1, 1], Relation::Le, 1), row(&[1, 1], Relation::Ge, 3)],
        )
        .unwrap();
        let c = solve(&p).unwrap();
        assert_eq!(c.status, LpStatus::Infeasible);
        assert!(verify_certificate(&p, &c));
    }

    #[test]
    fn unbounded_has_ray() {
        let p = LpProblem::new(obj(&[1, 1]), vec![row(&[1, -1], Relation::Le, 1)]).unwrap();
        let c = solve(&p).unwrap();
        assert_eq!(c.status, LpStatus::Unbounded);
        assert!(c.ray.is_some());
        assert!(verify_certificate(&p, &c));
    }

    #[test]
    fn degenerate_cycling_example_terminates() {
        // Beale's example cycles under the textbook largest-coefficient rule.
        let q = |n, d| rational(n, d);
        let p = LpProblem::new(
            vec![q(3, 4), q(-150, 1), q(1, 50), q(-6, 1)],
            vec![
                Constraint {
                    coefficients: vec![q(1, 4), q(-60, 1), q(-1, 25), q(9, 1)],
                    relation: Relation::Le,
                    rhs: int(0),
                },
                Constraint {
                    coefficients: vec![q(1, 2), q(-90, 1), q(-1, 50), q(3, 1)],
                    relation: Relation::Le,
                    rhs: int(0),
                },
                Constraint {
                    coefficients: vec![int(0), int(0), int(1), int(0)],
                    relation: Relation::Le,
                    rhs: int(1),
                },
            ],
        )
        .unwrap();
        let c = solve(&p).unwrap();
        assert_eq!(c.objective, rational(1, 20));
    }

    #[test]
    fn redundant_equality_pair() {
        // x + y = 2 written twice as a >= / <= pair, plus a copy.
        let p = LpProblem::new(
            obj(&[1, 2]),
            vec![
                row(&[1, 1], Relation::Ge, 2),
                row(&[1, 1], Relation::Le, 2),
                row(&[2, 2], Relation::Ge, 4),
            ],
        )
        .unwrap();
        let c = solve(&p).unwrap();
        assert_eq!(c.objective, int(4));
    }

    #[test]
    fn float_instantiation() {
        let p = LpProblem::new(
            vec![1.0f64, 1.0],
            vec![
                Constraint {
                    coefficients: vec![1.0, 2.0],
                    relation: Relation::Le,
                    rhs: 4.0,
                },
                Constraint {
                    coefficients: vec![4.0, 2.0],
                    relation: Relation::Le,
                    rhs: 12.0,
                },
            ],
        )
        .unwrap();
        let c = solve_unchecked(&p);
        assert_eq!(c.status, LpStatus::Optimal);
        assert!((c.objective - 10.0 / 3.0).abs() < 1e-12);
    }

    #[test]
    fn malformed_dimensions() {
        assert!(LpProblem::new(obj(&[1, 1]), vec![row(&[1], Relation::Le, 1)]).is_err());
        assert!(LpProblem::<BigRational>::new(obj(&[1]), vec![]).is_err());
    }

    #[test]
    fn text_dump_round_trip() {
        let p = LpProblem::new(
            vec![rational(1, 2), int(1)],
            vec![Constraint {
                coefficients: vec![int(1), rational(-3, 7)],
                relation: Relation::Ge,
                rhs: rational(71, 9),
            }],
        )
        .unwrap();
        let text = p.to_text();
        assert_eq!(text, "max 1/2 1\n1 -3/7 >= 71/9\n");
        assert_eq!(LpProblem::parse_text(&text).unwrap(), p);
    }
}
