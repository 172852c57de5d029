use gcatalan_core::analytic::{
    check_condition_c, contour_all, default_contour_params, kms_catalan, radius_continuation, radius_newton,
    ContinuationOptions,
};
use gcatalan_core::combinatorics::{count_trees, enumerate_dyck, enumerate_trees};
use gcatalan_core::dp::{catalan_table, CatalanTable};
use gcatalan_core::fixtures;
use gcatalan_core::fock::fock_moment;
use gcatalan_core::series::{functional_equation_residual, series_from_table};
use gcatalan_core::word::enumerate_words;
use gcatalan_core::{Budget, Error, Graph};
use num_bigint::BigUint;
use rand::rngs::StdRng;
use rand::SeedableRng;
use serde::Serialize;

use crate::render::pretty;
use crate::{CliError, Format};

const ENUM_DEPTH: usize = 4;
const FOCK_DEPTH: usize = 5;
const SERIES_ORDER: usize = 30;
const CONTOUR_DEPTH: usize = 4;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
enum Status {
    Pass,
    Fail,
    Skip,
}

#[derive(Debug, Serialize)]
struct Check {
    graph: String,
    stage: &'static str,
    status: Status,
    detail: String,
}

pub fn default_graphs(random: usize, seed: u64) -> Vec<(String, Graph)> {
    let mut out: Vec<(String, Graph)> = fixtures::bundled().into_iter().map(|(n, g)| (n.to_string(), g)).collect();
    let mut rng = StdRng::seed_from_u64(seed);
    out.extend((0..random).map(|k| (format!("random-{k}"), fixtures::random_irreducible(&mut rng, 3, 5))));
    out
}

fn outcome(r: Result<String, String>) -> (Status, String) {
    match r {
        Ok(d) => (Status::Pass, d),
        Err(d) => (Status::Fail, d),
    }
}

fn guarded(e: Error) -> Result<String, String> {
    Err(e.to_string())
}

fn enumeration(g: &Graph, table: &CatalanTable) -> (Status, String) {
    let budget = Budget::default();
    for n in 0..=ENUM_DEPTH {
        for v in g.vertices() {
            let exact = table.get(n, v);
            let counts = (|| -> Result<[usize; 3], Error> {
                Ok([
                    enumerate_words(g, n, Some(v), &budget)?.len(),
                    enumerate_dyck(g, n, Some(v), &budget)?.len(),
                    enumerate_trees(g, n, Some(v), &budget)?.len(),
                ])
            })();
            let counts = match counts {
                Ok(c) => c,
                Err(e @ Error::BudgetExceeded(_)) => return (Status::Skip, e.to_string()),
                Err(e) => return outcome(guarded(e)),
            };
            for (name, c) in ["words", "dyck paths", "trees"].iter().zip(counts) {
                if BigUint::from(c) != *exact {
                    return (Status::Fail, format!("{name}: {c} objects at n={n}, {v}; recurrence gives {exact}"));
                }
            }
            let by_branches = count_trees(g, n, Some(v));
            if by_branches != *exact {
                return (Status::Fail, format!("tree recurrence gives {by_branches} at n={n}, {v}; expected {exact}"));
            }
        }
    }
    (Status::Pass, format!("words = dyck = trees = dp for n <= {ENUM_DEPTH}"))
}

fn fock_stage(g: &Graph, table: &CatalanTable) -> (Status, String) {
    for n in 1..=FOCK_DEPTH {
        match fock_moment(g, n) {
            Ok(m) if m == table.totals[n] => {}
            Ok(m) => return (Status::Fail, format!("moment {m} at n={n}, recurrence total {}", table.totals[n])),
            Err(e @ Error::BudgetExceeded(_)) => return (Status::Skip, e.to_string()),
            Err(e) => return (Status::Fail, e.to_string()),
        }
    }
    (Status::Pass, format!("vacuum moments = totals for 1 <= n <= {FOCK_DEPTH}"))
}

fn series_stage(g: &Graph) -> (Status, String) {
    let (f, _) = series_from_table(&catalan_table(g, SERIES_ORDER));
    outcome(match functional_equation_residual(&f, g) {
        Ok(r) if r.iter().all(|s| s.is_zero()) => Ok(format!("residual zero through order {SERIES_ORDER}")),
        Ok(_) => Err("nonzero residual".into()),
        Err(e) => guarded(e),
    })
}

fn radius_stage(g: &Graph) -> (Status, String) {
    if !g.is_irreducible() {
        return (Status::Skip, "irreducibility required".into());
    }
    let run = || -> Result<String, String> {
        let a = radius_newton(g, None, 1e-8).map_err(|e| format!("newton: {e}"))?;
        let b = radius_continuation(g, ContinuationOptions::default()).map_err(|e| format!("continuation: {e}"))?;
        if (a.x0 - b.x0).abs() > 1e-6 {
            return Err(format!("newton {} vs continuation {}", a.x0, b.x0));
        }
        if !check_condition_c(g, &a.t, a.x0, 1e-9) {
            return Err("condition (C) fails at the solution".into());
        }
        let bound = 1.0 / (4.0 * g.vertex_matrix().column_sum_norm() as f64);
        if a.x0 < bound {
            return Err(format!("x0 = {} below 1/(4 norm) = {bound}", a.x0));
        }
        Ok(format!("x0 = {} (newton and continuation agree)", a.x0))
    };
    outcome(run())
}

fn contour_stage(g: &Graph, table: &CatalanTable) -> (Status, String) {
    if !g.is_irreducible() {
        return (Status::Skip, "irreducibility required".into());
    }
    let run = || -> Result<String, String> {
        let mut worst = 0.0f64;
        for n in 1..=CONTOUR_DEPTH {
            let (rho, m) = default_contour_params(g, n).map_err(|e| e.to_string())?;
            for v in g.vertices() {
                let exact: f64 = table.get(n, v).to_string().parse().expect("decimal integer");
                for c in contour_all(g, n, v, rho, m).map_err(|e| e.to_string())? {
                    let rel = (c - exact).abs() / exact;
                    worst = worst.max(rel);
                    if rel >= 1e-6 || c.round() != exact {
                        return Err(format!("n={n}, {v}: contour {c} vs exact {exact}"));
                    }
                }
            }
        }
        Ok(format!("all j agree, max relative error {worst:.1e} for n <= {CONTOUR_DEPTH}"))
    };
    outcome(run())
}

fn kms_stage(g: &Graph, table: &CatalanTable) -> (Status, String) {
    match g.period() {
        Err(_) => return (Status::Skip, "aperiodicity required: graph is not irreducible".into()),
        Ok(p) if p > 1 => return (Status::Skip, format!("aperiodicity required: graph has period {p}")),
        Ok(_) => {}
    }
    outcome(match kms_catalan(g, table, table.nmax(), 1e-10) {
        Ok((_, seq)) if (seq.totals[0] - 1.0).abs() <= 1e-10 => Ok(format!("r_G and weights found, c_0 = {}", seq.totals[0])),
        Ok((_, seq)) => Err(format!("weighted c_0 = {}", seq.totals[0])),
        Err(e) => guarded(e),
    })
}

pub fn run(graphs: &[(String, Graph)], format: Format) -> Result<String, CliError> {
    let mut checks = Vec::new();
    for (name, g) in graphs {
        let table = catalan_table(g, FOCK_DEPTH.max(ENUM_DEPTH));
        let stages: [(&'static str, (Status, String)); 6] = [
            ("enumeration", enumeration(g, &table)),
            ("fock", fock_stage(g, &table)),
            ("series", series_stage(g)),
            ("radius", radius_stage(g)),
            ("contour", contour_stage(g, &table)),
            ("kms", kms_stage(g, &table)),
        ];
        for (stage, (status, detail)) in stages {
            checks.push(Check { graph: name.clone(), stage, status, detail });
        }
    }
    let count = |s: Status| checks.iter().filter(|c| c.status == s).count();
    let (passed, failed, skipped) = (count(Status::Pass), count(Status::Fail), count(Status::Skip));
    let report = match format {
        Format::Json => pretty(&serde_json::json!({
            "checks": checks,
            "passed": passed,
            "failed": failed,
            "skipped": skipped,
        })),
        _ => {
            let mut out: String = checks
                .iter()
                .map(|c| {
                    let tag = match c.status {
                        Status::Pass => "pass",
                        Status::Fail => "FAIL",
                        Status::Skip => "skip",
                    };
                    format!("[{tag}] {}: {}: {}\n", c.graph, c.stage, c.detail)
                })
                .collect();
            out.push_str(&format!("selftest: {passed} passed, {failed} failed, {skipped} skipped\n"));
            out
        }
    };
    if failed > 0 {
        return Err(CliError { code: "E-SELFTEST", message: format!("{failed} checks failed\n{report}") });
    }
    Ok(report)
}
