//! Growth-rate experiments: build a construction for each `n`, count, and fit
//! `ln count` against `ln n`.

use crate::bounds::{catalog, BoundReport};
use crate::constructions::{generate, ConstructionSpec};
use crate::counting::{count, CountQuery, Method, Semantics, MOBIUS_LIMIT};
use crate::error::{Error, Result};
use crate::geometry::{Dim, Mode};
use crate::graphs::WeightedGraph;
use num_bigint::BigUint;
use num_traits::ToPrimitive;
use std::fmt::Write as _;
use std::time::Instant;

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct FitResult {
    pub slope: f64,
    pub intercept: f64,
    pub r_squared: f64,
}

/// Natural log of a big integer without overflowing `f64`.
pub fn ln_big(x: &BigUint) -> f64 {
    let bits = x.bits();
    if bits <= 1000 {
        return x.to_f64().unwrap_or(f64::INFINITY).ln();
    }
    let shift = bits - 64;
    (x >> shift).to_f64().unwrap_or(f64::INFINITY).ln() + shift as f64 * std::f64::consts::LN_2
}

/// Least-squares line through `(ln n, ln count)`.
pub fn fit_exponent(samples: &[(u64, BigUint)]) -> Result<FitResult> {
    if samples.len() < 3 {
        return Err(Error::InsufficientSamples(samples.len()));
    }
    if let Some((n, _)) = samples.iter().find(|(_, c)| *c == BigUint::ZERO) {
        return Err(Error::ZeroCount(*n));
    }
    let xs: Vec<f64> = samples.iter().map(|(n, _)| (*n as f64).ln()).collect();
    let ys: Vec<f64> = samples.iter().map(|(_, c)| ln_big(c)).collect();
    let k = xs.len() as f64;
    let mx = xs.iter().sum::<f64>() / k;
    let my = ys.iter().sum::<f64>() / k;
    let sxx: f64 = xs.iter().map(|x| (x - mx).powi(2)).sum();
    let sxy: f64 = xs.iter().zip(&ys).map(|(x, y)| (x - mx) * (y - my)).sum();
    let syy: f64 = ys.iter().map(|y| (y - my).powi(2)).sum();
    if sxx == 0.0 {
        return Err(Error::InvalidParams("all sample sizes are equal".into()));
    }
    let slope = sxy / sxx;
    let intercept = my - slope * mx;
    let sse: f64 = xs.iter().zip(&ys).map(|(x, y)| (y - intercept - slope * x).powi(2)).sum();
    let r_squared = if syy == 0.0 { 1.0 } else { (1.0 - sse / syy).clamp(0.0, 1.0) };
    Ok(FitResult { slope, intercept, r_squared })
}

#[derive(Clone, Debug, PartialEq)]
pub struct ExperimentConfig {
    /// Construction to build; its `n` is replaced by each grid value.
    pub construction: ConstructionSpec,
    /// Template to count; defaults to the construction's own template.
    pub template: Option<WeightedGraph>,
    pub semantics: Semantics,
    pub n_grid: Vec<usize>,
    pub query: CountQuery,
}

impl ExperimentConfig {
    pub fn new(construction: ConstructionSpec, n_grid: Vec<usize>) -> ExperimentConfig {
        ExperimentConfig {
            construction,
            template: None,
            semantics: Semantics::Homomorphism,
            n_grid,
            query: CountQuery::new(Mode::Distance, Semantics::Homomorphism),
        }
    }

    fn validate(&self) -> Result<()> {
        if self.n_grid.len() < 3 {
            return Err(Error::InvalidParams(format!("n grid needs at least 3 values, got {}", self.n_grid.len())));
        }
        if self.n_grid.windows(2).any(|w| w[0] >= w[1]) {
            return Err(Error::InvalidParams("n grid must be strictly increasing".into()));
        }
        Ok(())
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct ExperimentRow {
    pub n: usize,
    /// `None` when the row ran out of budget.
    pub count: Option<BigUint>,
    pub method: Method,
    pub seconds: f64,
}

#[derive(Clone, Debug, PartialEq)]
pub struct ExperimentReport {
    pub semantics: Semantics,
    pub mode: Mode,
    pub dim: Dim,
    pub rows: Vec<ExperimentRow>,
    pub fit: FitResult,
    /// Absent when the template is too large for the decomposition searches.
    pub bounds: Option<BoundReport>,
}

impl ExperimentReport {
    /// CSV report. With `timing` off the seconds column is zeroed so that
    /// repeated runs produce identical bytes.
    pub fn to_csv(&self, timing: bool) -> String {
        let mut s = format!("# semantics={} mode={} dim={}\n", self.semantics, self.mode, self.dim);
        s.push_str("n,count,method,seconds\n");
        for r in &self.rows {
            let count = r.count.as_ref().map_or_else(|| "budget_exceeded".to_string(), |c| c.to_string());
            let secs = if timing { r.seconds } else { 0.0 };
            let _ = writeln!(s, "{},{},{},{:.6}", r.n, count, r.method, secs);
        }
        s.push_str("fit_slope,fit_r2\n");
        let _ = writeln!(s, "{:.9},{:.9}", self.fit.slope, self.fit.r_squared);
        if let Some(b) = &self.bounds {
            s.push_str(BoundReport::CSV_HEADER);
            s.push('\n');
            for row in b.csv_rows() {
                s.push_str(&row);
                s.push('\n');
            }
        }
        s
    }
}

/// Runs the experiment row by row in increasing `n`.
///
/// Rows that exceed the counting budget are kept without a count; the fit
/// uses the remaining rows and fails if fewer than three are left.
pub fn run_experiment(cfg: &ExperimentConfig) -> Result<ExperimentReport> {
    cfg.validate()?;
    let mut rows = Vec::with_capacity(cfg.n_grid.len());
    let mut template_used = None;
    let mut mode_used = cfg.query.mode;
    for &n in &cfg.n_grid {
        let spec = ConstructionSpec { n, ..cfg.construction.clone() };
        let built = generate(&spec)?;
        let template = cfg.template.clone().unwrap_or(built.template);
        let q = CountQuery { mode: built.mode, semantics: cfg.semantics, ..cfg.query };
        mode_used = built.mode;
        let start = Instant::now();
        let res = count(&built.points, &template, &q);
        let seconds = start.elapsed().as_secs_f64();
        let method = match cfg.query.method {
            Method::Auto if cfg.semantics == Semantics::Injective && template.vertex_count() > MOBIUS_LIMIT => {
                Method::BruteForce
            }
            Method::Auto => Method::FastDp,
            m => m,
        };
        match res {
            Ok(r) => rows.push(ExperimentRow { n, count: Some(r.count), method: r.method_used, seconds }),
            Err(e) if e.is_budget() || matches!(e, Error::UnsupportedSemantics(_)) => {
                rows.push(ExperimentRow { n, count: None, method, seconds })
            }
            Err(e) => return Err(e),
        }
        template_used = Some(template);
    }
    let samples: Vec<(u64, BigUint)> =
        rows.iter().filter_map(|r| r.count.clone().map(|c| (r.n as u64, c))).collect();
    let fit = fit_exponent(&samples)?;
    let template = template_used.expect("grid is nonempty");
    let bounds = catalog(&template, mode_used, cfg.construction.dim).ok();
    Ok(ExperimentReport {
        semantics: cfg.semantics,
        mode: mode_used,
        dim: cfg.construction.dim,
        rows,
        fit,
        bounds,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn exact_power_laws() {
        let s: Vec<(u64, BigUint)> =
            vec![(10, 100u32.into()), (100, 10_000u32.into()), (1000, 1_000_000u32.into())];
        let f = fit_exponent(&s).unwrap();
        assert!((f.slope - 2.0).abs() < 1e-9);
        assert!((f.r_squared - 1.0).abs() < 1e-12);
        let s: Vec<(u64, BigUint)> = [8u64, 16, 32, 64].iter().map(|&n| (n, BigUint::from(n.pow(3)))).collect();
        assert!((fit_exponent(&s).unwrap().slope - 3.0).abs() < 1e-9);
    }

    #[test]
    fn fit_errors() {
        assert_eq!(fit_exponent(&[(1, 1u32.into())]), Err(Error::InsufficientSamples(1)));
        let s: Vec<(u64, BigUint)> = vec![(1, 1u32.into()), (2, 0u32.into()), (3, 1u32.into())];
        assert_eq!(fit_exponent(&s), Err(Error::ZeroCount(2)));
    }

    #[test]
    fn ln_of_huge_counts() {
        let x = BigUint::from(3u32).pow(2000);
        assert!((ln_big(&x) - 2000.0 * 3f64.ln()).abs() < 1e-9 * 2000.0);
    }
}
