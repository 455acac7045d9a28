//! One function per subcommand, each producing a [`Table`].

use num_bigint::BigInt;
use rayon::prelude::*;
use theta_heights_core::constants::{compute_rho, constants};
use theta_heights_core::enumeration::{
    count_trees, exact_moment, exceedance_counts, height_bounded_columns, height_distribution,
    HeightDistribution,
};
use theta_heights_core::limit_laws::{
    asymptotic_moment, saddle_bound, theta_j, theta_j1, theta_local, theta_survival, ThetaParams,
};
use theta_heights_core::sampler::empirical_height_stats;
use theta_heights_core::Error;

use crate::table::{rational_to_f64, Cell, Table};

/// Tolerance used for the constants feeding the theta laws.
pub const LAMBDA_TOL: f64 = 1e-13;
/// Accuracy requested from the theta sums in comparison tables.
pub const THETA_EPS: f64 = 1e-12;
/// Flag text for values lost to cancellation.
pub const ACCURACY_FLAG: &str = "accuracy_loss";

/// Exact law of `H_n` from a single height pass.
pub fn exact_distribution(n: usize) -> Result<HeightDistribution, Error> {
    let table = height_bounded_columns(&[n], n.saturating_sub(1))?;
    height_distribution(n, &table)
}

pub fn theta_params() -> Result<ThetaParams, Error> {
    ThetaParams::new(constants(LAMBDA_TOL)?.lambda.value())
}

fn rational_cell(q: &num_rational::BigRational) -> Cell {
    Cell::Rational {
        num: q.numer().clone(),
        den: q.denom().clone(),
    }
}

fn biguint_cell(v: &num_bigint::BigUint) -> Cell {
    Cell::Int(BigInt::from(v.clone()))
}

/// `y_1..y_n`.
pub fn count(n: usize) -> Table {
    let c = count_trees(n);
    let mut t = Table::new(["n", "count"]);
    for (i, y) in c.as_slice().iter().enumerate() {
        t.push(vec![Cell::int(i as u64 + 1), biguint_cell(y)]);
    }
    t
}

/// `y_{h,n}` and `e_{h,n}` for one size and heights `0..=h_max`.
pub fn heights(n: usize, h_max: Option<usize>) -> Result<Table, Error> {
    let h_max = h_max.unwrap_or(n - 1);
    let table = height_bounded_columns(&[n], h_max)?;
    let counts = count_trees(n);
    let ex = exceedance_counts(&table, &counts)?;
    let mut t = Table::new(["h", "at_most", "exceeding"]);
    for h in 0..=h_max {
        t.push(vec![
            Cell::int(h as u64),
            biguint_cell(table.get(h, n).expect("stored column")),
            biguint_cell(&ex.get(h, n).expect("stored column")),
        ]);
    }
    Ok(t)
}

/// Exact height law: counts, point probabilities and tails.
pub fn dist(n: usize) -> Result<Table, Error> {
    let d = exact_distribution(n)?;
    let mut t = Table::new(["h", "count", "p", "tail"]);
    for h in 0..=d.max_height() {
        t.push(vec![
            Cell::int(h as u64),
            biguint_cell(&d.mass(h)),
            rational_cell(&d.prob(h)),
            rational_cell(&d.tail(h)),
        ]);
    }
    Ok(t)
}

/// Certified `rho`, `lambda` and `lambda / (2 sqrt(pi))`.
pub fn constants_table(tol: f64) -> Result<Table, Error> {
    let k = constants(tol)?;
    let digits = (-tol.log10()).ceil().max(1.0) as u32 + 2;
    let mut t = Table::new(["name", "value", "error_bound", "lower", "upper", "decimal"]);
    for (name, v) in [("rho", &k.rho), ("lambda", &k.lambda), ("otter", &k.otter)] {
        t.push(vec![
            Cell::text(name),
            Cell::Float(v.value()),
            Cell::Float(v.err()),
            Cell::Float(v.lower()),
            Cell::Float(v.upper()),
            Cell::text(v.to_decimal(digits)),
        ]);
    }
    Ok(t)
}

fn flagged(v: Result<f64, Error>) -> Result<(Cell, bool), Error> {
    match v {
        Ok(x) => Ok((Cell::Float(x), false)),
        Err(Error::AccuracyLoss { .. }) => Ok((Cell::Missing, true)),
        Err(e) => Err(e),
    }
}

fn flag_cell(lost: bool) -> Cell {
    if lost {
        Cell::text(ACCURACY_FLAG)
    } else {
        Cell::Missing
    }
}

/// Theta survival, density and the sums `J`, `J_1` at one point.
pub fn theta(x: f64, eps: f64) -> Result<Table, Error> {
    let p = theta_params()?;
    let big_x = p.lambda() * x;
    let (s, l1) = flagged(theta_survival(x, p, eps))?;
    let (g, l2) = flagged(theta_local(x, p, eps))?;
    let (j, l3) = flagged(theta_j(big_x, eps))?;
    let (j1, l4) = flagged(theta_j1(big_x, eps))?;
    let mut t = Table::new(["x", "lambda_x", "survival", "local", "j", "j1", "flag"]);
    t.push(vec![
        Cell::Float(x),
        Cell::Float(big_x),
        s,
        g,
        j,
        j1,
        flag_cell(l1 || l2 || l3 || l4),
    ]);
    Ok(t)
}

/// Exact `E[H_n^k]` against `c_k n^(k/2)` for `k = 1..=r`.
pub fn moments(n: usize, r: u32) -> Result<Table, Error> {
    let d = exact_distribution(n)?;
    let p = theta_params()?;
    moments_from(&d, r, p)
}

pub fn moments_from(d: &HeightDistribution, r: u32, p: ThetaParams) -> Result<Table, Error> {
    let n = d.n() as f64;
    let mut t = Table::new(["r", "exact", "exact_scaled", "asymptotic", "rel_diff"]);
    for k in 1..=r {
        let m = exact_moment(d, k);
        let scaled = rational_to_f64(m.numer(), m.denom()) / n.powf(k as f64 / 2.0);
        let c = asymptotic_moment(k, p)?;
        t.push(vec![
            Cell::int(k),
            rational_cell(&m),
            Cell::Float(scaled),
            Cell::Float(c),
            Cell::Float((scaled - c).abs() / c),
        ]);
    }
    Ok(t)
}

/// Heights `round(x sqrt(n))` for `x = 0.3, 0.35, ..., 3.5`, deduplicated.
pub fn clt_grid(n: usize) -> Vec<usize> {
    let sn = (n as f64).sqrt();
    let mut hs: Vec<usize> = (0..=64)
        .map(|i| ((0.3 + 0.05 * i as f64) * sn).round() as usize)
        .filter(|&h| h >= 1)
        .collect();
    hs.dedup();
    hs
}

/// `P(H_n >= h)` against `S(h / sqrt(n))` on [`clt_grid`].
pub fn compare_clt(d: &HeightDistribution, p: ThetaParams) -> Result<Table, Error> {
    let sn = (d.n() as f64).sqrt();
    let rows: Vec<Result<Vec<Cell>, Error>> = clt_grid(d.n())
        .into_par_iter()
        .map(|h| {
            let x = h as f64 / sn;
            let exact = d.tail_f64(h);
            let (s, lost) = flagged(theta_survival(x, p, THETA_EPS))?;
            let diff = s.as_f64().map_or(Cell::Missing, |v| Cell::Float((exact - v).abs()));
            Ok(vec![
                Cell::Float(x),
                Cell::int(h as u64),
                Cell::Float(exact),
                s,
                diff,
                flag_cell(lost),
            ])
        })
        .collect();
    let mut t = Table::new(["x", "h", "exact", "theta", "abs_diff", "flag"]);
    for r in rows {
        t.push(r?);
    }
    Ok(t)
}

/// `sqrt(n) P(H_n = h)` against `g(h / sqrt(n))` for every `h` in the range
/// of [`clt_grid`].
pub fn compare_llt(d: &HeightDistribution, p: ThetaParams) -> Result<Table, Error> {
    let sn = (d.n() as f64).sqrt();
    let grid = clt_grid(d.n());
    let (lo, hi) = (grid[0], *grid.last().expect("nonempty grid"));
    let rows: Vec<Result<Vec<Cell>, Error>> = (lo..=hi)
        .into_par_iter()
        .map(|h| {
            let x = h as f64 / sn;
            let exact = sn * d.prob_f64(h);
            let (g, lost) = flagged(theta_local(x, p, THETA_EPS))?;
            let diff = g.as_f64().map_or(Cell::Missing, |v| Cell::Float((exact - v).abs()));
            Ok(vec![
                Cell::Float(x),
                Cell::int(h as u64),
                Cell::Float(exact),
                g,
                diff,
                flag_cell(lost),
            ])
        })
        .collect();
    let mut t = Table::new(["x", "h", "exact_scaled", "theta_local", "abs_diff", "flag"]);
    for r in rows {
        t.push(r?);
    }
    Ok(t)
}

/// Height histogram of seeded uniform samples next to the exact law. The
/// summary columns are filled on the first row only.
pub fn sample(n: usize, trials: u64, seed: u64) -> Result<Table, Error> {
    let counts = count_trees(n);
    let stats = empirical_height_stats(n, trials, &counts, seed)?;
    let d = exact_distribution(n)?;
    let mean = exact_moment(&d, 1);
    let mut t = Table::new([
        "h",
        "count",
        "frequency",
        "exact_p",
        "mean",
        "variance",
        "std_error",
        "exact_mean",
    ]);
    for (h, &c) in stats.histogram.iter().enumerate() {
        let summary = if h == 0 {
            vec![
                Cell::Float(stats.mean),
                Cell::Float(stats.variance),
                Cell::Float(stats.std_error()),
                Cell::Float(rational_to_f64(mean.numer(), mean.denom())),
            ]
        } else {
            vec![Cell::Missing; 4]
        };
        let mut row = vec![
            Cell::int(h as u64),
            Cell::int(c),
            Cell::Float(c as f64 / trials as f64),
            Cell::Float(d.prob_f64(h)),
        ];
        row.extend(summary);
        t.push(row);
    }
    Ok(t)
}

/// Saddle-point bound on `P(H_n >= h)` next to the exact tail.
pub fn bound(n: usize, h: usize) -> Result<Table, Error> {
    let counts = count_trees(n);
    let rho = compute_rho(1e-12)?.lower();
    let b = saddle_bound(n, h, &counts, rho)?;
    let d = exact_distribution(n)?;
    let mut t = Table::new(["n", "h", "bound", "log_bound", "radius", "exact", "rate"]);
    t.push(vec![
        Cell::int(n as u64),
        Cell::int(h as u64),
        Cell::Float(b.bound),
        Cell::Float(b.log_bound),
        Cell::Float(b.radius),
        rational_cell(&d.tail(h)),
        Cell::Float(b.rate(n)),
    ]);
    Ok(t)
}
