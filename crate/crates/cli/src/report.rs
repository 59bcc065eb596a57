//! JSON builders for the report objects. Keys come out sorted because
//! `serde_json::Map` is ordered; rationals are always `"num/den"` strings.

use serde_json::{json, Value};
use systole::cycle::Cycle;
use systole::deformation::{DeformationRecord, VcdWitness};
use systole::fill::{Membership, SystoleSupport};
use systole::flow::{Event, EventKind, Trajectory};
use systole::graph::MetricGraph;
use systole::homology::{LatticeIndex, LatticeVerdict};
use systole::maps::{EulerRelations, FaceTrace, FlagTransitivity, MapType, SystolesVsFaces};
use systole::rational::{self, Rational};
use systole::snf::IntMatrix;
use systole::suite::CheckRow;

pub fn q(x: &Rational) -> Value {
    Value::String(rational::format(x))
}

pub fn graph(g: &MetricGraph) -> Value {
    let edges: Vec<Value> = g
        .edges()
        .iter()
        .map(|e| json!({ "id": e.id.0, "u": e.u, "v": e.v, "length": q(&e.length) }))
        .collect();
    json!({
        "name": g.name(),
        "vertices": g.vertex_count(),
        "edges": edges,
        "rank": g.rank(),
        "volume": q(&g.volume()),
    })
}

pub fn cycle(g: &MetricGraph, c: &Cycle) -> Value {
    json!({
        "cycle": c.display(),
        "edges": c.edge_sequence().iter().map(|e| e.0).collect::<Vec<_>>(),
        "length": q(&c.length(g)),
    })
}

pub fn cycles(g: &MetricGraph, cs: &[Cycle]) -> Value {
    Value::Array(cs.iter().map(|c| cycle(g, c)).collect())
}

pub fn support(s: &SystoleSupport, g: &MetricGraph) -> Value {
    json!({
        "edges": s.edges.iter().map(|e| e.0).collect::<Vec<_>>(),
        "vertices": s.vertices,
        "length": q(&s.length),
        "betti": s.betti(g),
    })
}

pub fn index(i: &LatticeIndex) -> Value {
    match i {
        LatticeIndex::Finite(n) => Value::String(n.to_string()),
        LatticeIndex::Infinite => Value::String("infinite".into()),
    }
}

pub fn lattice(l: &LatticeVerdict) -> Value {
    json!({
        "rank": l.rank,
        "ambient_rank": l.ambient_rank,
        "divisors": l.divisors.iter().map(|d| d.to_string()).collect::<Vec<_>>(),
        "index": index(&l.index),
    })
}

pub fn membership(g: &MetricGraph, m: &Membership) -> Value {
    json!({
        "graph": graph(g),
        "systole_length": q(&m.systole_length),
        "systole_count": m.systoles.len(),
        "systoles": cycles(g, &m.systoles),
        "support": support(&m.support, g),
        "lattice": lattice(&m.lattice),
        "well_rounded": m.in_w,
        "topologically_fills": m.in_v,
        "geometrically_fills": m.in_vprime,
    })
}

fn matrix(m: &IntMatrix) -> Value {
    Value::Array(
        m.iter()
            .map(|row| {
                Value::Array(
                    row.iter()
                        .map(|x| match i64::try_from(x) {
                            Ok(v) => json!(v),
                            Err(_) => Value::String(x.to_string()),
                        })
                        .collect(),
                )
            })
            .collect(),
    )
}

pub fn kind(k: EventKind) -> &'static str {
    match k {
        EventKind::NewSystoles => "NewSystoles",
        EventKind::StageComplete => "StageComplete",
    }
}

pub fn event(e: &Event, before: &MetricGraph) -> Value {
    json!({
        "kind": kind(e.kind),
        "stage": e.stage,
        "u": q(&e.u),
        "stage_u": q(&e.stage_u),
        "t_approx": e.t_approx(),
        "new_systoles": cycles(before, &e.new_systoles),
        "contracted": e.contracted.iter().map(|x| x.0).collect::<Vec<_>>(),
        "homology_change": e.homology_change.as_ref().map(matrix),
        "graph": graph(&e.graph),
        "systole_length": q(&e.systole_length),
        "systole_count": e.systole_count,
        "support_betti": e.support_betti,
    })
}

pub fn trajectory(t: &Trajectory) -> Value {
    let mut before = &t.initial;
    let mut events = Vec::new();
    for e in &t.events {
        // new systoles are cycles of the graph before the event
        events.push(event(e, before));
        before = &e.graph;
    }
    json!({
        "initial": graph(&t.initial),
        "initial_systole_length": q(&t.initial_systole_length),
        "initial_support_betti": t.initial_support_betti,
        "events": events,
        "final": graph(t.final_graph()),
        "final_systole_length": q(t.final_systole_length()),
        "contractions": t.contraction_count(),
    })
}

pub fn dimension(g: &MetricGraph, r: &DeformationRecord, w: &VcdWitness) -> Value {
    json!({
        "graph": graph(g),
        "edges": r.edges,
        "systoles": r.systoles,
        "rank_diff": r.rank_diff,
        "dim": r.dim,
        "lower_bound": r.lower_bound,
        "systole_length": q(&r.systole_length),
        "next_length": r.next_length.as_ref().map(q),
        "positive_point": r.positive_point,
        "vcd": w.vcd,
        "exceeds": w.exceeds,
    })
}

pub fn faces(t: &FaceTrace) -> Value {
    json!({
        "face_count": t.face_count(),
        "faces": t.faces.iter().map(|f| {
            json!({
                "darts": f.darts.iter().map(|d| d.to_string()).collect::<Vec<_>>(),
                "embedded": f.cycle.is_some(),
            })
        }).collect::<Vec<_>>(),
        "euler_characteristic": t.euler_characteristic,
        "orientable": t.orientable,
        "genus": t.genus,
        "all_embedded": t.all_embedded,
    })
}

pub fn map_type(t: &MapType) -> Value {
    let hist = |m: &std::collections::BTreeMap<usize, usize>| {
        Value::Object(m.iter().map(|(k, v)| (k.to_string(), json!(v))).collect())
    };
    json!({
        "p": t.p,
        "q": t.q,
        "uniform": t.uniform,
        "face_lengths": hist(&t.face_lengths),
        "degrees": hist(&t.degrees),
    })
}

pub fn euler(r: &EulerRelations) -> Value {
    json!({
        "V": r.v, "E": r.e, "F": r.f, "p": r.p, "n": r.n,
        "3V=2E": r.three_v_eq_two_e,
        "2E=pF": r.two_e_eq_pf,
        "n=1+V/2": r.rank_formula,
        "F=6(n-1)/p": r.face_formula,
        "holds": r.holds(),
    })
}

pub fn flags(f: &FlagTransitivity) -> Value {
    json!({
        "transitive": f.transitive,
        "aut_order": f.aut_order,
        "flags": f.flags,
        "vertex_transitive": f.vertex_transitive,
        "edge_transitive": f.edge_transitive,
        "face_transitive": f.face_transitive,
    })
}

pub fn systoles_vs_faces(g: &MetricGraph, s: &SystolesVsFaces) -> Value {
    json!({
        "girth": s.girth,
        "p": s.p,
        "face_count": s.face_count,
        "min_cycle_count": s.min_cycle_count,
        "equal": s.equal,
        "extra_min_cycles": s.extra_min_cycles.iter().map(|c| {
            json!({ "cycle": c.display(), "edges": c.edge_sequence().iter().map(|e| e.0).collect::<Vec<_>>() })
        }).collect::<Vec<_>>(),
        "graph": g.name(),
    })
}

pub fn suite_row(r: &CheckRow) -> Value {
    json!({
        "name": r.name,
        "status": r.status.to_string(),
        "details": r.details,
    })
}
