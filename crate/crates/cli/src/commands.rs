use std::fs;
use std::path::Path;

use gcatalan_core::analytic::{
    cauchy_coefficient, contour_all, default_contour_params, kms_catalan, radius_continuation, radius_newton,
    radius_ratio_estimate, ContinuationOptions,
};
use gcatalan_core::combinatorics::{enumerate_dyck, enumerate_trees};
use gcatalan_core::dp::{catalan_edge, catalan_table};
use gcatalan_core::fock::{fock_moment_truncated, DEFAULT_BASIS_CAP};
use gcatalan_core::series::{functional_equation_residual, series_from_table};
use gcatalan_core::word::{enumerate_words, is_catalan_word};
use gcatalan_core::{parse_graph, Budget, EdgeId, Graph, Vertex};
use serde_json::{json, Map, Value};

use crate::render::{float, floats, pretty, Cell, Table};
use crate::{selftest, Cli, CliError, Command, CountMethod, Format, Kind, RadiusMethodArg};

pub fn run(cli: &Cli) -> Result<String, CliError> {
    let format = cli.format;
    match &cli.command {
        Command::Validate { graph } => {
            no_csv(format, "validate")?;
            validate(&load(graph)?, format)
        }
        Command::Count { graph, n, vertex, edge, method, rho, samples } => {
            if *method == CountMethod::Dp && (rho.is_some() || samples.is_some()) {
                return Err(CliError::args("--rho and --samples apply only to --method contour or cauchy"));
            }
            if let Some(r) = rho {
                if !(r.is_finite() && *r > 0.0) {
                    return Err(CliError::args(format!("--rho must be positive, got {r}")));
                }
            }
            if *samples == Some(0) {
                return Err(CliError::args("--samples must be at least 1"));
            }
            let g = load(graph)?;
            let column = match (vertex, edge) {
                (Some(v), _) => Column::Vertex(vertex_arg(&g, *v)?),
                (_, Some(e)) => Column::Edge(edge_arg(&g, e)?),
                _ => Column::All,
            };
            match method {
                CountMethod::Dp => count_exact(&g, *n, column, format),
                m => count_contour(&g, *n, column, *m, *rho, *samples, format),
            }
        }
        Command::Enumerate { graph, n, kind, vertex, budget } => {
            let budget = match budget {
                Some(0) => return Err(CliError::args("--budget must be positive")),
                Some(b) => Budget::objects(*b),
                None => Budget::default(),
            };
            let g = load(graph)?;
            let root = vertex.map(|v| vertex_arg(&g, v)).transpose()?;
            enumerate(&g, *n, *kind, root, &budget, format)
        }
        Command::Series { graph, order } => series(&load(graph)?, *order, format),
        Command::Radius { graph, method, tol, order } => {
            no_csv(format, "radius")?;
            if !(tol.is_finite() && *tol > 0.0) {
                return Err(CliError::args(format!("--tol must be positive, got {tol}")));
            }
            radius(&load(graph)?, *method, *tol, *order, format)
        }
        Command::Kms { graph, n, tol } => {
            if !(tol.is_finite() && *tol > 0.0) {
                return Err(CliError::args(format!("--tol must be positive, got {tol}")));
            }
            kms(&load(graph)?, *n, *tol, format)
        }
        Command::Fock { graph, n, budget } => {
            if *n == 0 {
                return Err(CliError::args("--n must be at least 1 for vacuum moments"));
            }
            let cap = budget.unwrap_or(DEFAULT_BASIS_CAP);
            fock(&load(graph)?, *n, cap, format)
        }
        Command::Selftest { graph, random, seed } => {
            no_csv(format, "selftest")?;
            let graphs = match graph {
                Some(path) => vec![(path.display().to_string(), load(path)?)],
                None => selftest::default_graphs(*random, *seed),
            };
            selftest::run(&graphs, format)
        }
    }
}

fn no_csv(format: Format, what: &str) -> Result<(), CliError> {
    if format == Format::Csv {
        return Err(CliError::args(format!("{what} has no csv output; use json or text")));
    }
    Ok(())
}

fn load(path: &Path) -> Result<Graph, CliError> {
    let text = fs::read_to_string(path)
        .map_err(|e| CliError { code: "E-IO", message: format!("cannot read {}: {e}", path.display()) })?;
    Ok(parse_graph(&text)?)
}

fn vertex_arg(g: &Graph, v: usize) -> Result<Vertex, CliError> {
    if v == 0 || v > g.num_vertices() {
        return Err(CliError::args(format!("--vertex {v} outside 1..={}", g.num_vertices())));
    }
    Ok(Vertex(v))
}

/// A 1-based edge position, or an edge label.
fn edge_arg(g: &Graph, e: &str) -> Result<EdgeId, CliError> {
    match e.parse::<usize>() {
        Ok(k) if k >= 1 && k <= g.num_edges() => Ok(EdgeId(k - 1)),
        Ok(k) => Err(CliError::args(format!("--edge {k} outside 1..={}", g.num_edges()))),
        Err(_) => g.edge_by_name(e).map_err(|_| CliError::args(format!("no edge labeled {e:?}"))),
    }
}

#[derive(Clone, Copy)]
enum Column {
    All,
    Vertex(Vertex),
    Edge(EdgeId),
}

fn validate(g: &Graph, format: Format) -> Result<String, CliError> {
    let irreducible = g.is_irreducible();
    let period = if irreducible { Some(g.period()?) } else { None };
    let vm = g.vertex_matrix().rows();
    let em = g.edge_matrix().rows();
    let norm = g.vertex_matrix().column_sum_norm();
    let edges: Vec<Value> = g
        .edges()
        .iter()
        .map(|e| json!({"edge": g.edge_name(e.id), "src": e.source.0, "dst": e.target.0}))
        .collect();
    if format == Format::Json {
        return Ok(pretty(&json!({
            "vertices": g.num_vertices(),
            "edges": edges,
            "irreducible": irreducible,
            "period": period,
            "column_sum_norm": norm,
            "vertex_matrix": vm,
            "edge_matrix": em,
        })));
    }
    let mut out = format!("valid graph: {} vertices, {} edges\n", g.num_vertices(), g.num_edges());
    for e in g.edges() {
        out.push_str(&format!("  {}: {} -> {}\n", g.edge_name(e.id), e.source, e.target));
    }
    out.push_str(&format!("irreducible: {irreducible}\n"));
    match period {
        Some(p) => out.push_str(&format!("period: {p}{}\n", if p == 1 { " (aperiodic)" } else { "" })),
        None => out.push_str("period: undefined (not irreducible)\n"),
    }
    out.push_str(&format!("column-sum norm: {norm}\n"));
    let matrix = |rows: Vec<Vec<String>>| {
        rows.into_iter().map(|r| format!("  [{}]\n", r.join(" "))).collect::<String>()
    };
    out.push_str("vertex matrix:\n");
    out.push_str(&matrix(vm.iter().map(|r| r.iter().map(u64::to_string).collect()).collect()));
    out.push_str("edge matrix:\n");
    out.push_str(&matrix(em.iter().map(|r| r.iter().map(u8::to_string).collect()).collect()));
    Ok(out)
}

fn count_columns(g: &Graph, column: Column) -> Vec<String> {
    let mut cols = vec!["n".to_string()];
    match column {
        Column::All => {
            cols.extend(g.vertices().map(|v| v.to_string()));
            cols.push("total".into());
        }
        Column::Vertex(v) => cols.push(v.to_string()),
        Column::Edge(e) => cols.push(g.edge_name(e)),
    }
    cols
}

fn count_exact(g: &Graph, n: usize, column: Column, format: Format) -> Result<String, CliError> {
    let table = catalan_table(g, n);
    let mut out = Table::new(count_columns(g, column));
    let edge_values = match column {
        Column::Edge(e) => Some(catalan_edge(g, n, e)),
        _ => None,
    };
    for k in 0..=n {
        let mut row = vec![Cell::Int(k)];
        match column {
            Column::All => {
                row.extend(g.vertices().map(|v| Cell::Exact(table.get(k, v).to_string())));
                row.push(Cell::Exact(table.totals[k].to_string()));
            }
            Column::Vertex(v) => row.push(Cell::Exact(table.get(k, v).to_string())),
            Column::Edge(_) => row.push(Cell::Exact(edge_values.as_ref().expect("edge column")[k].to_string())),
        }
        out.push(row);
    }
    let mut meta = Map::new();
    meta.insert("method".into(), json!("dp"));
    Ok(out.render(format, meta))
}

fn count_contour(
    g: &Graph,
    n: usize,
    column: Column,
    method: CountMethod,
    rho: Option<f64>,
    samples: Option<usize>,
    format: Format,
) -> Result<String, CliError> {
    let vertices: Vec<Vertex> = match column {
        Column::All => g.vertices().collect(),
        Column::Vertex(v) => vec![v],
        Column::Edge(e) => vec![g.source(e)],
    };
    let mut out = Table::new(count_columns(g, column).into_iter().chain(["max_deviation".to_string()]));
    let mut used = Vec::new();
    for k in 0..=n {
        let mut row = vec![Cell::Int(k)];
        let mut values = Vec::new();
        let mut deviation = 0.0f64;
        for &v in &vertices {
            if k == 0 {
                values.push(1.0);
                continue;
            }
            let (default_rho, default_m) = default_contour_params(g, k)?;
            let (r, m) = (rho.unwrap_or(default_rho), samples.unwrap_or(default_m));
            used.push((k, r, m));
            let estimates = match method {
                CountMethod::Contour => contour_all(g, k, v, r, m)?,
                _ => vec![cauchy_coefficient(g, k, v, r, m)?],
            };
            let value = estimates[0];
            for x in &estimates {
                deviation = deviation.max((x - x.round()).abs());
                deviation = deviation.max((x - value).abs());
            }
            values.push(value);
        }
        let rounded: Vec<f64> = values.iter().map(|x| x.round()).collect();
        row.extend(rounded.iter().map(|x| Cell::Exact(format!("{x:.0}"))));
        if matches!(column, Column::All) {
            row.push(Cell::Exact(format!("{:.0}", rounded.iter().sum::<f64>())));
        }
        row.push(Cell::Float(deviation));
        out.push(row);
    }
    let mut meta = Map::new();
    meta.insert("method".into(), json!(if method == CountMethod::Contour { "contour" } else { "cauchy" }));
    meta.insert(
        "contour".into(),
        Value::Array(used.iter().map(|(k, r, m)| json!({"n": k, "rho": r, "samples": m})).collect()),
    );
    Ok(out.render(format, meta))
}

fn enumerate(
    g: &Graph,
    n: usize,
    kind: Kind,
    root: Option<Vertex>,
    budget: &Budget,
    format: Format,
) -> Result<String, CliError> {
    let zero_roots: Vec<Vertex> = root.map_or_else(|| g.vertices().collect(), |v| vec![v]);
    let rows: Vec<(Vertex, String)> = match kind {
        Kind::Words => enumerate_words(g, n, root, budget)?
            .iter()
            .enumerate()
            .map(|(k, w)| {
                let r = if n == 0 { zero_roots[k] } else { is_catalan_word(w, g)?.expect("enumerated word is Catalan") };
                Ok((r, w.render(g)))
            })
            .collect::<Result<_, CliError>>()?,
        Kind::Dyck => enumerate_dyck(g, n, root, budget)?
            .iter()
            .enumerate()
            .map(|(k, p)| {
                let r = if n == 0 { zero_roots[k] } else { p.validate(g)? };
                Ok((r, p.render(g)))
            })
            .collect::<Result<_, CliError>>()?,
        Kind::Trees => enumerate_trees(g, n, root, budget)?.iter().map(|t| (t.vertex, t.render(g))).collect(),
    };
    let mut table = Table::new(["root", "object"]);
    for (r, obj) in rows {
        table.push(vec![Cell::Text(r.to_string()), Cell::Text(obj)]);
    }
    let mut meta = Map::new();
    meta.insert("kind".into(), json!(format!("{kind:?}").to_lowercase()));
    meta.insert("n".into(), json!(n));
    meta.insert("count".into(), json!(table.rows.len()));
    Ok(table.render(format, meta))
}

fn series(g: &Graph, order: usize, format: Format) -> Result<String, CliError> {
    let table = catalan_table(g, order);
    let (per_vertex, total) = series_from_table(&table);
    let residual_zero = functional_equation_residual(&per_vertex, g)?.iter().all(|r| r.is_zero());
    let strings: Vec<Vec<String>> = per_vertex.iter().map(|s| s.to_strings()).collect();
    let total_strings = total.to_strings();
    if format == Format::Json {
        let per: Map<String, Value> =
            g.vertices().zip(&strings).map(|(v, s)| (v.to_string(), json!(s))).collect();
        return Ok(pretty(&json!({
            "order": order,
            "per_vertex": per,
            "total": total_strings,
            "residual_zero": residual_zero,
        })));
    }
    let mut t = Table::new(std::iter::once("k".to_string()).chain(g.vertices().map(|v| v.to_string())).chain(["total".to_string()]));
    for k in 0..=order {
        let mut row = vec![Cell::Int(k)];
        row.extend(strings.iter().map(|s| Cell::Exact(s[k].clone())));
        row.push(Cell::Exact(total_strings[k].clone()));
        t.push(row);
    }
    let mut out = t.render(format, Map::new());
    if format == Format::Text {
        out.push_str(&format!(
            "functional equations: residual {} through order {order}\n",
            if residual_zero { "zero" } else { "NONZERO" }
        ));
    }
    Ok(out)
}

fn radius(g: &Graph, method: RadiusMethodArg, tol: f64, order: usize, format: Format) -> Result<String, CliError> {
    let result = match method {
        RadiusMethodArg::Newton => radius_newton(g, None, tol)?,
        RadiusMethodArg::Continuation => radius_continuation(g, ContinuationOptions { tol, ..Default::default() })?,
        RadiusMethodArg::Ratio => radius_ratio_estimate(g, order)?,
    };
    if format == Format::Json {
        return Ok(pretty(&result));
    }
    let method_name = format!("{:?}", result.method).to_lowercase();
    let lower_bound = 1.0 / (4.0 * g.vertex_matrix().column_sum_norm() as f64);
    Ok(format!(
        "method: {method_name}\nx0: {}\nt: {}\ns: {}\nresiduals: {}\ncondition (C): {}\nlower bound 1/(4 norm): {lower_bound}\n",
        float(result.x0),
        floats(&result.t),
        floats(&result.s),
        floats(&result.residuals),
        if result.condition_c_ok { "ok" } else { "fails" },
    ))
}

fn kms(g: &Graph, n: usize, tol: f64, format: Format) -> Result<String, CliError> {
    let table = catalan_table(g, n);
    let (data, seq) = kms_catalan(g, &table, n, tol)?;
    let mut t =
        Table::new(std::iter::once("n".to_string()).chain(g.vertices().map(|v| v.to_string())).chain(["total".to_string()]));
    for k in 0..=n {
        let mut row = vec![Cell::Int(k)];
        row.extend(seq.per_vertex.iter().map(|s| Cell::Float(s[k])));
        row.push(Cell::Float(seq.totals[k]));
        t.push(row);
    }
    match format {
        Format::Json => {
            let mut meta = Map::new();
            meta.insert("kms".into(), serde_json::to_value(&data).expect("serializable"));
            meta.insert("tol".into(), json!(tol));
            Ok(t.render(format, meta))
        }
        Format::Csv => Ok(t.csv()),
        Format::Text => Ok(format!(
            "r_G: {}\nedge vector: {}\nvertex weights: {}\nresidual: {:e}\n{}",
            float(data.r_g),
            floats(&data.edge_vector),
            floats(&data.vertex_weights),
            data.residual,
            t.text()
        )),
    }
}

fn fock(g: &Graph, n: usize, cap: usize, format: Format) -> Result<String, CliError> {
    let table = catalan_table(g, n);
    let mut t = Table::new(["n", "moment", "dp_total", "match"]);
    for k in 1..=n {
        let m = fock_moment_truncated(g, k, k, cap)?;
        let matches = m == table.totals[k];
        t.push(vec![Cell::Int(k), Cell::Exact(m.to_string()), Cell::Exact(table.totals[k].to_string()), Cell::Bool(matches)]);
    }
    let mut meta = Map::new();
    meta.insert("basis_cap".into(), json!(cap));
    Ok(t.render(format, meta))
}
