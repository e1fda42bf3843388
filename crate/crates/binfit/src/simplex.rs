//! Derivative-free simplex maximization (Nelder-Mead) for the binned
//! likelihoods. Objectives may return -inf to mark infeasible points.

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub(crate) enum SimplexStatus {
    /// Both the value spread and the vertex spread met their tolerances.
    Converged,
    /// Values converged but the simplex is still wider than the parameter
    /// tolerance when the iteration budget ran out.
    StalledAboveXTol,
    /// The iteration budget ran out before the value spread converged.
    IterationLimit,
}

#[derive(Debug, Clone)]
pub(crate) struct SimplexResult {
    pub x: Vec<f64>,
    pub value: f64,
    pub status: SimplexStatus,
}

pub(crate) struct SimplexOptions {
    pub max_iterations: u32,
    pub value_tol: f64,
    pub x_tol: f64,
}

struct Vertex {
    x: Vec<f64>,
    value: f64,
}

/// Maximizes `f` from `start`, stepping `steps[j]` along each axis to build
/// the initial simplex. Returns the best vertex ever evaluated, so the
/// result value is never below `f(start)`.
pub(crate) fn maximize(
    f: &dyn Fn(&[f64]) -> f64,
    start: &[f64],
    steps: &[f64],
    opts: &SimplexOptions,
) -> SimplexResult {
    let dim = start.len();
    assert!(dim >= 1 && steps.len() == dim);
    let eval = |x: &[f64]| -> f64 {
        let v = f(x);
        if v.is_nan() {
            f64::NEG_INFINITY
        } else {
            v
        }
    };

    let mut simplex: Vec<Vertex> = Vec::with_capacity(dim + 1);
    simplex.push(Vertex { x: start.to_vec(), value: eval(start) });
    for j in 0..dim {
        let mut x = start.to_vec();
        let step = if steps[j] != 0.0 { steps[j] } else { 0.1 };
        x[j] += step;
        let value = eval(&x);
        simplex.push(Vertex { x, value });
    }
    sort_desc(&mut simplex);

    let mut best = Vertex { x: simplex[0].x.clone(), value: simplex[0].value };
    let mut status = SimplexStatus::IterationLimit;

    for _ in 0..opts.max_iterations {
        let value_spread = simplex[0].value - simplex[dim].value;
        let xs = x_spread(&simplex);
        if value_spread.abs() <= opts.value_tol {
            if xs <= opts.x_tol {
                status = SimplexStatus::Converged;
                break;
            }
            status = SimplexStatus::StalledAboveXTol;
            // Keep contracting: the x spread shrinks geometrically and may
            // still reach tolerance within the budget.
        }

        // Centroid of all vertices except the worst.
        let mut centroid = vec![0.0; dim];
        for v in &simplex[..dim] {
            for (c, &xi) in centroid.iter_mut().zip(&v.x) {
                *c += xi;
            }
        }
        for c in &mut centroid {
            *c /= dim as f64;
        }

        let worst = simplex[dim].value;
        let second_worst = simplex[dim - 1].value;
        let reflected = combine(&centroid, &simplex[dim].x, 1.0);
        let f_reflected = eval(&reflected);

        if f_reflected > simplex[0].value {
            let expanded = combine(&centroid, &simplex[dim].x, 2.0);
            let f_expanded = eval(&expanded);
            if f_expanded > f_reflected {
                replace_worst(&mut simplex, expanded, f_expanded);
            } else {
                replace_worst(&mut simplex, reflected, f_reflected);
            }
        } else if f_reflected > second_worst {
            replace_worst(&mut simplex, reflected, f_reflected);
        } else {
            let (contracted, f_contracted) = if f_reflected > worst {
                let outside = combine(&centroid, &simplex[dim].x, 0.5);
                let fo = eval(&outside);
                (outside, fo)
            } else {
                let inside = combine(&centroid, &simplex[dim].x, -0.5);
                let fi = eval(&inside);
                (inside, fi)
            };
            if f_contracted > worst.max(f_reflected) {
                replace_worst(&mut simplex, contracted, f_contracted);
            } else {
                // Shrink toward the best vertex.
                let anchor = simplex[0].x.clone();
                for v in &mut simplex[1..] {
                    for (xi, &ai) in v.x.iter_mut().zip(&anchor) {
                        *xi = ai + 0.5 * (*xi - ai);
                    }
                    v.value = eval(&v.x);
                }
                sort_desc(&mut simplex);
            }
        }

        if simplex[0].value > best.value {
            best.x.clone_from(&simplex[0].x);
            best.value = simplex[0].value;
        }
    }

    SimplexResult { x: best.x, value: best.value, status }
}

fn sort_desc(simplex: &mut [Vertex]) {
    simplex.sort_by(|a, b| b.value.total_cmp(&a.value));
}

/// centroid + coeff * (centroid - worst)
fn combine(centroid: &[f64], worst: &[f64], coeff: f64) -> Vec<f64> {
    centroid
        .iter()
        .zip(worst)
        .map(|(&c, &w)| c + coeff * (c - w))
        .collect()
}

fn replace_worst(simplex: &mut Vec<Vertex>, x: Vec<f64>, value: f64) {
    let last = simplex.len() - 1;
    simplex[last] = Vertex { x, value };
    sort_desc(simplex);
}

fn x_spread(simplex: &[Vertex]) -> f64 {
    let dim = simplex[0].x.len();
    let mut spread: f64 = 0.0;
    for j in 0..dim {
        let mut lo = f64::INFINITY;
        let mut hi = f64::NEG_INFINITY;
        for v in simplex {
            lo = lo.min(v.x[j]);
            hi = hi.max(v.x[j]);
        }
        spread = spread.max(hi - lo);
    }
    spread
}

#[cfg(test)]
mod tests {
    use super::*;

    fn opts() -> SimplexOptions {
        SimplexOptions { max_iterations: 2000, value_tol: 1e-12, x_tol: 1e-8 }
    }

    #[test]
    fn finds_quadratic_maximum() {
        let f = |x: &[f64]| -((x[0] - 3.0).powi(2) + 2.0 * (x[1] + 1.0).powi(2));
        let r = maximize(&f, &[0.0, 0.0], &[0.5, 0.5], &opts());
        assert_eq!(r.status, SimplexStatus::Converged);
        assert!((r.x[0] - 3.0).abs() < 1e-6, "{:?}", r.x);
        assert!((r.x[1] + 1.0).abs() < 1e-6, "{:?}", r.x);
    }

    #[test]
    fn never_returns_below_start() {
        // A ridge with an infeasible half-plane.
        let f = |x: &[f64]| {
            if x[0] > 2.0 {
                f64::NEG_INFINITY
            } else {
                -(x[0] - 1.0).powi(2) - x[1].powi(2)
            }
        };
        let start = [1.5, 0.2];
        let r = maximize(&f, &start, &[1.0, 1.0], &opts());
        assert!(r.value >= f(&start));
        assert!(r.value.is_finite());
    }

    #[test]
    fn rosenbrock_valley() {
        let f =
            |x: &[f64]| -(100.0 * (x[1] - x[0] * x[0]).powi(2) + (1.0 - x[0]).powi(2));
        let r = maximize(
            &f,
            &[-1.2, 1.0],
            &[0.5, 0.5],
            &SimplexOptions { max_iterations: 5000, value_tol: 1e-14, x_tol: 1e-9 },
        );
        assert!((r.x[0] - 1.0).abs() < 1e-4, "{:?}", r.x);
        assert!((r.x[1] - 1.0).abs() < 1e-4, "{:?}", r.x);
    }

    #[test]
    fn iteration_limit_reported() {
        let f = |x: &[f64]| -(x[0] * x[0]);
        let r = maximize(
            &f,
            &[100.0],
            &[1.0],
            &SimplexOptions { max_iterations: 3, value_tol: 1e-14, x_tol: 1e-10 },
        );
        assert_eq!(r.status, SimplexStatus::IterationLimit);
    }
}
