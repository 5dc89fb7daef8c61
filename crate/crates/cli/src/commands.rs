use std::collections::BTreeMap;
use std::path::Path;

use serde_json::{json, Value};

use tropical_core::graph::{
    abel_jacobi, abel_jacobi_on_edge, chain_coordinates, dolbeault_dims, is_harmonic, jacobian, jacobian_with_basis,
    laplacian_divisor, path_chain, solve_dirichlet, theta_cycles, theta_graph, GraphPoint, JacobianLattice,
    MetricGraph,
};
use tropical_core::io::{self, FieldJson, GraphJson, PLFunctionJson, PLMapJson, WeightedComplexJson, Q};
use tropical_core::lagerberg::{green_check, poincare_lelong_check, stokes_check, CurrentPairingReport, FormField};
use tropical_core::linalg::{fmt_rational, parse_rational, sub_q, QMatrix, QVector, Rational};
use tropical_core::tropical::{pushforward, weil_divisor_detailed, PLFunction, PLMap, WeightedComplex};

use crate::report::{Check, InputDigest, RunReport};
use crate::{Command, GraphCommand};

type Outcome = Result<(Vec<Check>, Value), String>;

#[derive(Default)]
struct Inputs {
    digests: Vec<InputDigest>,
}

impl Inputs {
    fn read(&mut self, path: &Path) -> Result<String, String> {
        let bytes = std::fs::read(path).map_err(|e| format!("cannot read {}: {e}", path.display()))?;
        self.digests.push(InputDigest::of(path, &bytes));
        String::from_utf8(bytes).map_err(|_| format!("{} is not UTF-8", path.display()))
    }

    fn complex(&mut self, path: &Path) -> Result<WeightedComplex, String> {
        let j: WeightedComplexJson = io::parse(&self.read(path)?).map_err(err)?;
        j.to_complex().map_err(err)
    }

    fn function(&mut self, path: &Path) -> Result<PLFunction, String> {
        let j: PLFunctionJson = io::parse(&self.read(path)?).map_err(err)?;
        j.to_function().map_err(err)
    }

    fn map(&mut self, path: &Path) -> Result<PLMap, String> {
        let j: PLMapJson = io::parse(&self.read(path)?).map_err(err)?;
        j.to_map().map_err(err)
    }

    fn field(&mut self, path: &Path) -> Result<FormField, String> {
        let j: FieldJson = io::parse(&self.read(path)?).map_err(err)?;
        j.to_field().map_err(err)
    }

    fn graph(&mut self, path: &Path) -> Result<(GraphJson, MetricGraph), String> {
        let j: GraphJson = io::parse(&self.read(path)?).map_err(err)?;
        let g = j.to_graph().map_err(err)?;
        Ok((j, g))
    }
}

fn err(e: impl std::fmt::Display) -> String {
    e.to_string()
}

fn q(x: &Rational) -> Value {
    Value::String(fmt_rational(x))
}

fn qv(v: &[Rational]) -> Value {
    Value::Array(v.iter().map(q).collect())
}

fn qm(m: &QMatrix) -> Value {
    Value::Array(m.row_vecs().iter().map(|r| qv(r)).collect())
}

pub(crate) fn dispatch(cmd: &Command) -> RunReport {
    let mut inputs = Inputs::default();
    let (name, outcome) = match cmd {
        Command::Balance { complex } => ("balance", balance(&mut inputs, complex)),
        Command::Divisor { complex, function } => ("divisor", divisor(&mut inputs, complex, function)),
        Command::Pushforward { complex, map } => ("pushforward", push(&mut inputs, complex, map)),
        Command::Stokes { complex, form } => ("stokes", stokes(&mut inputs, complex, form)),
        Command::Green { complex, omega, eta } => ("green", green(&mut inputs, complex, omega, eta)),
        Command::PoincareLelong { complex, function, eta } => {
            ("poincare-lelong", poincare_lelong(&mut inputs, complex, function, eta))
        }
        Command::Graph { command } => match command {
            GraphCommand::HarmonicCheck { graph } => ("graph harmonic-check", harmonic(&mut inputs, graph)),
            GraphCommand::Dirichlet { graph, values } => {
                ("graph dirichlet", dirichlet(&mut inputs, graph, values.as_deref()))
            }
            GraphCommand::Jacobian { graph } => ("graph jacobian", graph_jacobian(&mut inputs, graph)),
            GraphCommand::AbelJacobi { graph, base, points } => {
                ("graph abel-jacobi", graph_abel_jacobi(&mut inputs, graph, base.as_deref(), points))
            }
            GraphCommand::Dolbeault { graph } => ("graph dolbeault", dolbeault(&mut inputs, graph)),
        },
        Command::ThetaDemo { a, b, c } => ("theta-demo", theta_demo(a, b, c)),
    };
    match outcome {
        Ok((checks, data)) => RunReport::new(name, inputs.digests, checks, data),
        Err(e) => RunReport::failure(name, inputs.digests, e),
    }
}

fn complex_summary(c: &WeightedComplex) -> Value {
    Value::Array(
        c.weighted_cells()
            .iter()
            .map(|(p, m)| json!({"cell": p.to_string(), "weight": m}))
            .collect(),
    )
}

fn balance(inputs: &mut Inputs, path: &Path) -> Outcome {
    let c = inputs.complex(path)?;
    let checks: Vec<Check> = c
        .balance_reports()
        .into_iter()
        .map(|r| {
            let cert: Vec<String> = r.certificate.iter().map(|x| format!("{x}/1")).collect();
            Check::new(
                format!("balanced at {}", c.complex().cell(r.face)),
                r.balanced,
                json!({ "certificate": cert }),
            )
        })
        .collect();
    let boundary: Vec<String> = c.boundary_faces().iter().map(|&t| c.complex().cell(t).to_string()).collect();
    Ok((checks, json!({ "dim": c.dim(), "boundary_faces": boundary })))
}

fn divisor(inputs: &mut Inputs, complex: &Path, function: &Path) -> Outcome {
    let c = inputs.complex(complex)?;
    let f = inputs.function(function)?;
    let rep = weil_divisor_detailed(&c, &f).map_err(err)?;
    let unbalanced: Vec<String> = rep.unbalanced_faces.iter().map(|p| p.to_string()).collect();
    let checks = vec![Check::new(
        "multiplicities independent of the reference cell",
        unbalanced.is_empty(),
        json!({ "unbalanced_faces": unbalanced }),
    )];
    let data = json!({
        "divisor": WeightedComplexJson::from_complex(&rep.divisor),
        "cells": complex_summary(&rep.divisor),
    });
    Ok((checks, data))
}

fn push(inputs: &mut Inputs, complex: &Path, map: &Path) -> Outcome {
    let c = inputs.complex(complex)?;
    let l = inputs.map(map)?;
    let image = pushforward(&c, &l).map_err(err)?;
    let mut checks = Vec::new();
    if c.is_tropical_cycle() {
        checks.push(Check::new("image of a tropical cycle is balanced", image.is_tropical_cycle(), Value::Null));
    }
    let data = json!({
        "pushforward": WeightedComplexJson::from_complex(&image),
        "cells": complex_summary(&image),
    });
    Ok((checks, data))
}

fn pairing_check(r: &CurrentPairingReport) -> Vec<Check> {
    vec![Check::new(
        r.identity_name.clone(),
        r.holds(),
        json!({ "lhs": q(&r.lhs), "rhs": q(&r.rhs), "boundary_term": q(&r.boundary_term) }),
    )]
}

fn stokes(inputs: &mut Inputs, complex: &Path, form: &Path) -> Outcome {
    let c = inputs.complex(complex)?;
    let eta = inputs.field(form)?;
    Ok((pairing_check(&stokes_check(&eta, &c).map_err(err)?), Value::Null))
}

fn green(inputs: &mut Inputs, complex: &Path, omega: &Path, eta: &Path) -> Outcome {
    let c = inputs.complex(complex)?;
    let omega = inputs.field(omega)?;
    let eta = inputs.field(eta)?;
    Ok((pairing_check(&green_check(&omega, &eta, &c).map_err(err)?), Value::Null))
}

fn poincare_lelong(inputs: &mut Inputs, complex: &Path, function: &Path, eta: &Path) -> Outcome {
    let c = inputs.complex(complex)?;
    let f = inputs.function(function)?;
    let eta = inputs.field(eta)?;
    Ok((pairing_check(&poincare_lelong_check(&f, &eta, &c).map_err(err)?), Value::Null))
}

fn vertex_values(g: &MetricGraph, values: &[Rational]) -> Value {
    let m: BTreeMap<&str, Value> = (0..g.vertex_count()).map(|v| (g.vertex_name(v), q(&values[v]))).collect();
    json!(m)
}

fn harmonic(inputs: &mut Inputs, path: &Path) -> Outcome {
    let (j, g) = inputs.graph(path)?;
    let h = j
        .function(&g)
        .map_err(err)?
        .ok_or("the graph file has no \"function\" to check")?;
    let r = is_harmonic(&g, &h);
    let defects: BTreeMap<&str, Value> = r.defects.iter().map(|(&v, d)| (g.vertex_name(v), q(d))).collect();
    Ok((
        vec![Check::new("harmonic", r.harmonic, json!({ "edge_affine": r.edge_affine, "defects": defects }))],
        Value::Null,
    ))
}

fn dirichlet(inputs: &mut Inputs, path: &Path, values: Option<&Path>) -> Outcome {
    let (j, g) = inputs.graph(path)?;
    let bv = match values {
        Some(p) => {
            let m: BTreeMap<String, Q> = io::parse(&inputs.read(p)?).map_err(err)?;
            GraphJson {
                boundary_values: Some(m),
                ..j.clone()
            }
            .boundary_values(&g)
            .map_err(err)?
        }
        None => j.boundary_values(&g).map_err(err)?,
    }
    .ok_or("no boundary values given")?;
    let h = solve_dirichlet(&g, &bv).map_err(err)?;
    let harmonic = is_harmonic(&g, &h).harmonic;
    let vals = h.vertex_values();
    let on_boundary: Vec<&Rational> = g.boundary().iter().map(|&v| &vals[v]).collect();
    let extrema_ok = match (on_boundary.iter().max(), on_boundary.iter().min()) {
        (Some(hi), Some(lo)) => vals.iter().all(|x| x <= *hi && x >= *lo),
        _ => true,
    };
    let lap = laplacian_divisor(&g, &h);
    let interior: Vec<String> = lap.interior_part(&g).support().iter().map(|p| g.point_label(p)).collect();
    let checks = vec![
        Check::new("harmonic", harmonic, Value::Null),
        Check::new("extrema attained on the boundary", extrema_ok, Value::Null),
        Check::new("laplacian supported on the boundary", interior.is_empty(), json!({ "interior_support": interior })),
    ];
    Ok((checks, json!({ "values": vertex_values(&g, vals) })))
}

fn cycles_json(g: &MetricGraph, lat: &JacobianLattice) -> Value {
    Value::Array(
        lat.cycles
            .iter()
            .map(|c| {
                let m: BTreeMap<&str, i64> = c
                    .iter()
                    .enumerate()
                    .filter(|(_, &x)| x != 0)
                    .map(|(e, &x)| (g.edge(e).label.as_str(), x))
                    .collect();
                json!(m)
            })
            .collect(),
    )
}

fn lattice(j: &GraphJson, g: &MetricGraph) -> Result<JacobianLattice, String> {
    match j.cycles(g).map_err(err)? {
        Some(cycles) => jacobian_with_basis(g, cycles),
        None => jacobian(g),
    }
    .map_err(err)
}

fn leading_minors_positive(m: &QMatrix) -> bool {
    (1..=m.rows()).all(|k| {
        let idx: Vec<usize> = (0..k).collect();
        let rows: Vec<QVector> = idx.iter().map(|&i| idx.iter().map(|&j| m.get(i, j).clone()).collect()).collect();
        QMatrix::from_rows(&rows, k).determinant() > Rational::from_integer(0.into())
    })
}

fn graph_jacobian(inputs: &mut Inputs, path: &Path) -> Outcome {
    let (j, g) = inputs.graph(path)?;
    let lat = lattice(&j, &g)?;
    let checks = vec![Check::new("pairing positive definite", leading_minors_positive(&lat.gram), Value::Null)];
    let data = json!({
        "betti": lat.rank(),
        "cycles": cycles_json(&g, &lat),
        "gram": qm(&lat.gram),
        "covolume": q(&lat.covolume()),
    });
    Ok((checks, data))
}

fn parse_point(g: &MetricGraph, s: &str) -> Result<GraphPoint, String> {
    if let Some((label, pos)) = s.split_once('@') {
        let e = g.edge_index(label).ok_or_else(|| format!("unknown edge {label:?}"))?;
        let pos = parse_rational(pos).ok_or_else(|| format!("bad position {pos:?}"))?;
        g.point_on_edge(e, pos).map_err(err)
    } else {
        g.vertex_index(s)
            .map(GraphPoint::Vertex)
            .ok_or_else(|| format!("unknown vertex {s:?}"))
    }
}

fn graph_abel_jacobi(inputs: &mut Inputs, path: &Path, base: Option<&str>, points: &[String]) -> Outcome {
    let (j, g) = inputs.graph(path)?;
    let lat = lattice(&j, &g)?;
    let base = match base {
        Some(b) => g.vertex_index(b).ok_or_else(|| format!("unknown vertex {b:?}"))?,
        None => 0,
    };
    if g.vertex_count() == 0 {
        return Err("the graph has no vertices".into());
    }
    let pts: Vec<GraphPoint> = if points.is_empty() {
        (0..g.vertex_count()).map(GraphPoint::Vertex).collect()
    } else {
        points.iter().map(|s| parse_point(&g, s)).collect::<Result<_, _>>()?
    };
    let mut rows = Vec::new();
    let mut consistent = true;
    for p in &pts {
        let value = abel_jacobi(&g, &lat, base, p).map_err(err)?;
        // reaching an edge point from the head end must agree modulo the lattice
        if let GraphPoint::Edge { edge, position } = p {
            let e = g.edge(*edge);
            let mut chain = path_chain(&g, base, &GraphPoint::Vertex(e.head)).map_err(err)?;
            chain[*edge] -= &e.length - position;
            let other = chain_coordinates(&lat, &chain);
            consistent &= lat.contains(&sub_q(&other, &chain_coordinates(&lat, &path_chain(&g, base, p).map_err(err)?)));
        }
        rows.push(json!({ "point": g.point_label(p), "value": qv(&value) }));
    }
    let checks = vec![Check::new("independent of the path modulo the lattice", consistent, Value::Null)];
    Ok((checks, json!({ "base": g.vertex_name(base), "cycles": cycles_json(&g, &lat), "images": rows })))
}

fn dolbeault(inputs: &mut Inputs, path: &Path) -> Outcome {
    let (_, g) = inputs.graph(path)?;
    let t = dolbeault_dims(&g).map_err(err)?;
    let b = g.betti_number();
    let checks = vec![Check::new(
        "table equals (1, b, b, 1)",
        (t.h00, t.h10, t.h01, t.h11) == (1, b, b, 1),
        json!({ "betti": b }),
    )];
    Ok((checks, json!({ "h00": t.h00, "h10": t.h10, "h01": t.h01, "h11": t.h11 })))
}

fn theta_demo(a: &str, b: &str, c: &str) -> Outcome {
    let parse = |s: &str| parse_rational(s).ok_or_else(|| format!("not a rational length: {s:?}"));
    let (la, lb, lc) = (parse(a)?, parse(b)?, parse(c)?);
    let g = theta_graph(la.clone(), lb.clone(), lc.clone()).map_err(err)?;
    let lat = jacobian_with_basis(&g, theta_cycles()).map_err(err)?;
    let canonical = jacobian(&g).map_err(err)?;
    let zero = Rational::from_integer(0.into());
    let one = Rational::from_integer(1.into());
    let expected_rows = [vec![&la + &lc, lc.clone()], vec![lc.clone(), &lb + &lc]];
    let mut checks = Vec::new();
    for (i, row) in expected_rows.iter().enumerate() {
        checks.push(Check::new(
            format!("iota(gamma{}) in displayed coordinates", i + 1),
            &lat.generator(i) == row,
            json!({ "computed": qv(&lat.generator(i)), "expected": qv(row) }),
        ));
    }
    // displayed parametrizations t ↦ slope·t + offset, from P
    let displayed = [
        ("c", vec![one.clone(), one.clone()], vec![zero.clone(), zero.clone()]),
        ("a", vec![-one.clone(), zero.clone()], vec![&la + &lc, lc.clone()]),
        ("b", vec![zero.clone(), -one.clone()], vec![lc.clone(), &lb + &lc]),
    ];
    let mut formulas = Vec::new();
    for (label, slope, offset) in &displayed {
        let e = g.edge_index(label).expect("theta edges");
        let (s, o) = abel_jacobi_on_edge(&g, &lat, 0, e).map_err(err)?;
        let same = &s == slope && lat.contains(&sub_q(&o, offset));
        checks.push(Check::new(
            format!("abel-jacobi on edge {label}"),
            same,
            json!({ "slope": qv(&s), "offset": qv(&o), "displayed_offset": qv(offset) }),
        ));
        formulas.push(json!({ "edge": label, "slope": qv(slope), "offset": qv(offset) }));
    }
    let t = dolbeault_dims(&g).map_err(err)?;
    checks.push(Check::new(
        "dolbeault table (1, 2, 2, 1)",
        (t.h00, t.h10, t.h01, t.h11) == (1, 2, 2, 1),
        Value::Null,
    ));
    let data = json!({
        "lengths": { "a": q(&la), "b": q(&lb), "c": q(&lc) },
        "betti": g.betti_number(),
        "gram": qm(&lat.gram),
        "iota_rows": qm(&lat.gram),
        "covolume": q(&lat.covolume()),
        "canonical_cycles": cycles_json(&g, &canonical),
        "canonical_gram": qm(&canonical.gram),
        "abel_jacobi": formulas,
        "dolbeault": [t.h00, t.h10, t.h01, t.h11],
    });
    Ok((checks, data))
}
