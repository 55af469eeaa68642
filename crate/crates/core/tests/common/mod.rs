//! Test-only reference implementations. Nothing here calls into the
//! library's inference path; models are read as plain parameters and
//! evaluated with straight-line loops.

#![allow(dead_code)]

use std::fmt::Write as _;
use std::path::PathBuf;

use spectrum_fuzzy::FuzzyModel;

pub const DENSE_GRID: usize = 10_001;

#[derive(Debug, Clone)]
pub struct OracleVar {
    pub lo: f64,
    pub hi: f64,
    /// (center, sigma) per term
    pub terms: Vec<(f64, f64)>,
}

#[derive(Debug, Clone)]
pub struct OracleModel {
    pub inputs: Vec<OracleVar>,
    pub output: OracleVar,
    /// (antecedent term per input, consequent term, weight)
    pub rules: Vec<(Vec<usize>, usize, f64)>,
}

impl OracleModel {
    pub fn from_model(m: &FuzzyModel) -> Self {
        let var = |v: &spectrum_fuzzy::FuzzyVariable| OracleVar {
            lo: v.lo(),
            hi: v.hi(),
            terms: v.terms().iter().map(|t| (t.center(), t.sigma())).collect(),
        };
        OracleModel {
            inputs: m.inputs().iter().map(var).collect(),
            output: var(m.output()),
            rules: m
                .rules()
                .iter()
                .map(|r| (r.antecedents.clone(), r.consequent, r.weight))
                .collect(),
        }
    }
}

pub fn gauss(x: f64, center: f64, sigma: f64) -> f64 {
    (-((x - center) * (x - center)) / (2.0 * sigma * sigma)).exp()
}

/// Mamdani min/max with trapezoidal centroid over `n` output samples.
pub fn oracle_infer(m: &OracleModel, x: &[f64], n: usize) -> f64 {
    let mut mu = Vec::new();
    for (v, &xi) in m.inputs.iter().zip(x) {
        let xi = if xi < v.lo {
            v.lo
        } else if xi > v.hi {
            v.hi
        } else {
            xi
        };
        mu.push(
            v.terms
                .iter()
                .map(|&(c, s)| gauss(xi, c, s))
                .collect::<Vec<f64>>(),
        );
    }
    let mut strengths = Vec::new();
    for (ante, _, w) in &m.rules {
        let mut s = 1.0f64;
        for (k, &t) in ante.iter().enumerate() {
            if mu[k][t] < s {
                s = mu[k][t];
            }
        }
        strengths.push(w * s);
    }
    let (lo, hi) = (m.output.lo, m.output.hi);
    let h = (hi - lo) / (n - 1) as f64;
    let mut num = 0.0;
    let mut den = 0.0;
    for i in 0..n {
        let g = lo + (hi - lo) * (i as f64) / ((n - 1) as f64);
        let mut agg = 0.0f64;
        for (r, (_, cons, _)) in m.rules.iter().enumerate() {
            let (c, s) = m.output.terms[*cons];
            let clipped = strengths[r].min(gauss(g, c, s));
            if clipped > agg {
                agg = clipped;
            }
        }
        let w = if i == 0 || i == n - 1 { h / 2.0 } else { h };
        num += g * agg * w;
        den += agg * w;
    }
    num / den
}

/// Midpoint Riemann-sum centroid of `f` over `[lo, hi]` with `intervals` cells.
pub fn riemann_centroid(f: impl Fn(f64) -> f64, lo: f64, hi: f64, intervals: usize) -> f64 {
    let h = (hi - lo) / intervals as f64;
    let mut num = 0.0;
    let mut den = 0.0;
    for i in 0..intervals {
        let x = lo + (i as f64 + 0.5) * h;
        let y = f(x);
        num += x * y;
        den += y;
    }
    num / den
}

pub fn linspace(lo: f64, hi: f64, n: usize) -> Vec<f64> {
    (0..n)
        .map(|i| lo + (hi - lo) * (i as f64) / ((n - 1) as f64))
        .collect()
}

/// Surface CSV: empty corner, column samples across, row samples down.
pub fn surface_csv(rows: &[f64], cols: &[f64], grid: &[Vec<f64>]) -> String {
    let mut s = String::new();
    for c in cols {
        write!(s, ",{c:.6}").unwrap();
    }
    s.push('\n');
    for (r, line) in rows.iter().zip(grid) {
        write!(s, "{r:.6}").unwrap();
        for v in line {
            write!(s, ",{v:.6}").unwrap();
        }
        s.push('\n');
    }
    s
}

pub struct PresetLayout {
    pub fig: u8,
    /// model input index swept down the rows, and its universe
    pub rows: (usize, f64, f64),
    pub cols: (usize, f64, f64),
    pub fixed: [(usize, f64); 2],
}

/// Figure presets written out independently of the library's preset table.
/// Input order: signal, velocity, ratio, distance.
pub fn preset_layouts() -> Vec<PresetLayout> {
    let signal = (0, -100.0, -20.0);
    let velocity = (1, 0.0, 100.0);
    let ratio = (2, 0.0, 1.0);
    let distance = (3, 0.0, 100.0);
    vec![
        PresetLayout {
            fig: 7,
            rows: signal,
            cols: distance,
            fixed: [(1, 50.0), (2, 0.5)],
        },
        PresetLayout {
            fig: 8,
            rows: velocity,
            cols: ratio,
            fixed: [(3, 50.0), (0, -60.0)],
        },
        PresetLayout {
            fig: 9,
            rows: signal,
            cols: ratio,
            fixed: [(3, 50.0), (1, 50.0)],
        },
        PresetLayout {
            fig: 10,
            rows: velocity,
            cols: distance,
            fixed: [(2, 0.5), (0, -60.0)],
        },
        PresetLayout {
            fig: 11,
            rows: signal,
            cols: velocity,
            fixed: [(3, 50.0), (2, 0.5)],
        },
    ]
}

pub fn oracle_surface(
    m: &OracleModel,
    layout: &PresetLayout,
    steps: usize,
    grid_points: usize,
) -> String {
    let rows = linspace(layout.rows.1, layout.rows.2, steps);
    let cols = linspace(layout.cols.1, layout.cols.2, steps);
    let grid: Vec<Vec<f64>> = rows
        .iter()
        .map(|&r| {
            cols.iter()
                .map(|&c| {
                    let mut x = [0.0; 4];
                    x[layout.rows.0] = r;
                    x[layout.cols.0] = c;
                    for (k, v) in layout.fixed {
                        x[k] = v;
                    }
                    oracle_infer(m, &x, grid_points)
                })
                .collect()
        })
        .collect();
    surface_csv(&rows, &cols, &grid)
}

pub fn golden_path(fig: u8) -> PathBuf {
    PathBuf::from(env!("CARGO_MANIFEST_DIR")).join(format!("tests/golden/fig{fig}.csv"))
}

pub fn fixture_path(name: &str) -> PathBuf {
    PathBuf::from(env!("CARGO_MANIFEST_DIR"))
        .join("tests/fixtures")
        .join(name)
}
