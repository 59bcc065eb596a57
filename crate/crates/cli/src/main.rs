mod report;

use std::fmt::Write as _;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Parser, Subcommand};
use serde_json::{json, Value};
use systole::cycles::DEFAULT_CYCLE_CAP;
use systole::deformation::{self, VcdWitness};
use systole::error::Error;
use systole::fill;
use systole::flow::{self, FlowLimits};
use systole::format::{parse_graph_file, GraphFile};
use systole::graph::Mode;
use systole::maps::{self, CombinatorialMap};
use systole::rational::format as q;
use systole::suite::{self, Status};

#[derive(Parser)]
#[command(name = "systole", version, about = "Systoles, filling and the retraction flow on metric graphs")]
struct Cli {
    /// Emit a machine-readable JSON report.
    #[arg(long, global = true)]
    json: bool,
    /// Allow vertices of degree <= 2 and rank 1.
    #[arg(long, global = true)]
    permissive: bool,
    /// Maximum number of cycles any single enumeration may produce.
    #[arg(long, global = true, value_name = "N", default_value_t = DEFAULT_CYCLE_CAP)]
    cycle_cap: usize,
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Systoles, systole lattice and filling classification.
    Analyze { file: PathBuf },
    /// Run the retraction flow until the systoles cover the graph.
    Retract {
        file: PathBuf,
        /// Write the full trajectory as JSON to this file.
        #[arg(long, value_name = "FILE")]
        trace: Option<PathBuf>,
        #[arg(long, value_name = "N")]
        max_events: Option<usize>,
        #[arg(long, value_name = "N")]
        max_contractions: Option<usize>,
    },
    /// Local dimension of the equal-systole locus and comparison with 2n-3.
    Dimension { file: PathBuf },
    /// Face tracing, type, Euler relations, symmetry and systoles of a map.
    MapCheck { file: PathBuf },
    /// Run the bundled verification suite.
    VerifyPaper {
        /// Only run checks whose name contains this string.
        #[arg(long, value_name = "NAME")]
        filter: Option<String>,
    },
}

/// Failure of a command: a library refusal, or an I/O problem.
enum Failure {
    Domain(Error),
    Io(String),
    /// Bad flag value that clap cannot see; exits with the usage status.
    Usage(String),
    /// Report already printed; just exit non-zero.
    Silent,
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        Failure::Domain(e)
    }
}

struct Output {
    json: Value,
    text: String,
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(&cli) {
        Ok(out) => {
            emit(&cli, &out);
            ExitCode::SUCCESS
        }
        Err(Failure::Silent) => ExitCode::from(1),
        Err(Failure::Usage(m)) => {
            eprintln!("error: {m}");
            ExitCode::from(2)
        }
        Err(f) => {
            let (kind, message) = match &f {
                Failure::Domain(e) => (e.kind(), e.to_string()),
                Failure::Io(m) => ("Io", m.clone()),
                Failure::Silent | Failure::Usage(_) => unreachable!(),
            };
            if cli.json {
                let v = json!({ "error": { "kind": kind, "message": message } });
                println!("{}", serde_json::to_string_pretty(&v).expect("serializable"));
            } else {
                eprintln!("error ({kind}): {message}");
            }
            ExitCode::from(1)
        }
    }
}

fn emit(cli: &Cli, out: &Output) {
    if cli.json {
        println!("{}", serde_json::to_string_pretty(&out.json).expect("serializable"));
    } else {
        print!("{}", out.text);
    }
}

fn run(cli: &Cli) -> Result<Output, Failure> {
    let mode = if cli.permissive { Mode::Permissive } else { Mode::OuterSpace };
    match &cli.command {
        Command::Analyze { file } => analyze(&load(file)?, mode, cli.cycle_cap),
        Command::Retract {
            file,
            trace,
            max_events,
            max_contractions,
        } => {
            let limits = FlowLimits {
                max_events_per_stage: *max_events,
                max_contractions: *max_contractions,
                cycle_cap: Some(cli.cycle_cap),
                permissive: cli.permissive,
            };
            retract(&load(file)?, &limits, trace.as_deref())
        }
        Command::Dimension { file } => dimension(&load(file)?, mode, cli.cycle_cap),
        Command::MapCheck { file } => map_check(&load(file)?, cli.cycle_cap),
        Command::VerifyPaper { filter } => verify(cli, filter.as_deref()),
    }
}

fn load(path: &Path) -> Result<GraphFile, Failure> {
    let text = std::fs::read_to_string(path)
        .map_err(|e| Failure::Io(format!("cannot read {}: {e}", path.display())))?;
    Ok(parse_graph_file(&text)?)
}

fn yes(b: bool) -> &'static str {
    if b {
        "yes"
    } else {
        "no"
    }
}

fn analyze(f: &GraphFile, mode: Mode, cap: usize) -> Result<Output, Failure> {
    let g = &f.graph;
    g.check_mode(mode)?;
    let m = fill::classify_membership_capped(g, cap)?;
    let mut text = String::new();
    let _ = writeln!(text, "graph {}: V={} E={} rank={} volume={}", g.name(), g.vertex_count(), g.edge_count(), g.rank(), q(&g.volume()));
    let _ = writeln!(text, "systoles: {} of length {}", m.systoles.len(), q(&m.systole_length));
    for c in &m.systoles {
        let _ = writeln!(text, "  {}", c.display());
    }
    let _ = writeln!(
        text,
        "support: {} edges, length {}, betti {}",
        m.support.edges.len(),
        q(&m.support.length),
        m.support.betti(g)
    );
    let divisors: Vec<String> = m.lattice.divisors.iter().map(|d| d.to_string()).collect();
    let _ = writeln!(
        text,
        "systole lattice: rank {}/{}, divisors [{}], index {}",
        m.lattice.rank,
        m.lattice.ambient_rank,
        divisors.join(" "),
        report::index(&m.lattice.index).as_str().unwrap_or_default()
    );
    let _ = writeln!(
        text,
        "well-rounded (W): {}\ntopologically fills (V): {}\ngeometrically fills (V'): {}",
        yes(m.in_w),
        yes(m.in_v),
        yes(m.in_vprime)
    );
    Ok(Output {
        json: report::membership(g, &m),
        text,
    })
}

fn retract(f: &GraphFile, limits: &FlowLimits, trace: Option<&Path>) -> Result<Output, Failure> {
    // The flow lives in the unit-volume slice; rescale rather than refuse.
    let g = f.graph.normalize_volume();
    let t = match flow::retract_to_spine(&g, limits) {
        Ok(t) => t,
        Err(Error::CapExceeded { what, cap, partial }) => {
            if let Some(path) = trace {
                write_json(path, &report::trajectory(&partial))?;
            }
            return Err(Failure::Domain(Error::CapExceeded { what, cap, partial }));
        }
        Err(e) => return Err(e.into()),
    };
    let json = report::trajectory(&t);
    if let Some(path) = trace {
        write_json(path, &json)?;
    }
    let mut text = String::new();
    let _ = writeln!(text, "initial systole length {}", q(&t.initial_systole_length));
    for (i, e) in t.events.iter().enumerate() {
        let _ = writeln!(
            text,
            "event {}: {} stage {} u={} (stage u={}, t~{:.6}) systole {} x{}, support betti {}{}",
            i + 1,
            report::kind(e.kind),
            e.stage,
            q(&e.u),
            q(&e.stage_u),
            e.t_approx(),
            q(&e.systole_length),
            e.systole_count,
            e.support_betti,
            if e.contracted.is_empty() {
                String::new()
            } else {
                let ids: Vec<String> = e.contracted.iter().map(|x| x.0.to_string()).collect();
                format!(", contracted [{}]", ids.join(" "))
            }
        );
    }
    let fin = t.final_graph();
    let lengths: Vec<String> = fin.edges().iter().map(|e| format!("e{}={}", e.id.0, q(&e.length))).collect();
    let _ = writeln!(text, "final graph: V={} E={} {}", fin.vertex_count(), fin.edge_count(), lengths.join(" "));
    let _ = writeln!(text, "final systole length {}", q(t.final_systole_length()));
    Ok(Output { json, text })
}

fn write_json(path: &Path, v: &Value) -> Result<(), Failure> {
    let body = serde_json::to_string_pretty(v).expect("serializable") + "\n";
    std::fs::write(path, body).map_err(|e| Failure::Io(format!("cannot write {}: {e}", path.display())))
}

fn dimension(f: &GraphFile, mode: Mode, cap: usize) -> Result<Output, Failure> {
    let g = &f.graph;
    g.check_mode(mode)?;
    let sys = systole::cycles::all_systoles_capped(g, cap)?;
    let rec = deformation::local_deformation_dimension_for(g, &sys, cap)?;
    let w = VcdWitness::from_record(g, &rec);
    let mut text = String::new();
    let _ = writeln!(text, "E={} F={} rank(differences)={}", rec.edges, rec.systoles, rec.rank_diff);
    let _ = writeln!(text, "dim={} (lower bound E-F={})", rec.dim, rec.lower_bound);
    let _ = writeln!(
        text,
        "systole length {}, next cycle length {}",
        q(&rec.systole_length),
        rec.next_length.as_ref().map_or("none".to_string(), q)
    );
    let _ = writeln!(text, "positive base point: {}", yes(rec.positive_point));
    let _ = writeln!(text, "vcd=2n-3={} exceeds: {}", w.vcd, yes(w.exceeds));
    Ok(Output {
        json: report::dimension(g, &rec, &w),
        text,
    })
}

fn map_check(f: &GraphFile, cap: usize) -> Result<Output, Failure> {
    let m = CombinatorialMap::from_file(f)?;
    let g = m.graph();
    let trace = maps::trace_faces(&m);
    let ty = maps::map_type_check(&m);
    let ft = maps::flag_transitivity(&m);
    let euler = maps::euler_relations(&m);
    let sf = maps::systoles_equal_faces_capped(&m, cap);

    let mut text = String::new();
    let _ = writeln!(text, "map {}: V={} E={} F={}", g.name(), g.vertex_count(), g.edge_count(), trace.face_count());
    let _ = writeln!(
        text,
        "euler characteristic {} ({}, {} {})",
        trace.euler_characteristic,
        if trace.orientable { "orientable" } else { "non-orientable" },
        if trace.orientable { "genus" } else { "crosscaps" },
        trace.genus
    );
    let _ = writeln!(text, "faces embedded: {}", yes(trace.all_embedded));
    match (ty.p, ty.q) {
        (Some(p), Some(qq)) => {
            let _ = writeln!(text, "type {{{p},{qq}}}");
        }
        _ => {
            let _ = writeln!(text, "not uniform: face lengths {:?}, degrees {:?}", ty.face_lengths, ty.degrees);
        }
    }
    let _ = writeln!(
        text,
        "automorphisms: {} of {} flags, flag-transitive: {} (vertex {}, edge {}, face {})",
        ft.aut_order,
        ft.flags,
        yes(ft.transitive),
        yes(ft.vertex_transitive),
        yes(ft.edge_transitive),
        yes(ft.face_transitive)
    );
    let mut json = json!({
        "graph": report::graph(g),
        "faces": report::faces(&trace),
        "type": report::map_type(&ty),
        "flag_transitivity": report::flags(&ft),
    });
    match &euler {
        Ok(r) => {
            let _ = writeln!(
                text,
                "3V=2E: {}  2E=pF: {}  n=1+V/2: {}  F=6(n-1)/p: {}  (n={})",
                yes(r.three_v_eq_two_e),
                yes(r.two_e_eq_pf),
                yes(r.rank_formula),
                yes(r.face_formula),
                r.n
            );
            json["euler_relations"] = report::euler(r);
        }
        Err(e) => {
            let _ = writeln!(text, "euler relations: not applicable ({e})");
            json["euler_relations"] = json!({ "error": e.kind() });
        }
    }
    match &sf {
        Ok(s) => {
            let _ = writeln!(
                text,
                "girth {} vs face length {}: {} girth cycles, {} faces, systoles = faces: {}",
                s.girth,
                s.p,
                s.min_cycle_count,
                s.face_count,
                yes(s.equal)
            );
            for c in &s.extra_min_cycles {
                let _ = writeln!(text, "  extra {}", c.display());
            }
            json["systoles_equal_faces"] = report::systoles_vs_faces(g, s);
        }
        Err(Error::NotUniform) => {
            json["systoles_equal_faces"] = json!({ "error": "NotUniform" });
        }
        Err(_) => return Err(sf.unwrap_err().into()),
    }
    Ok(Output { json, text })
}

fn verify(cli: &Cli, filter: Option<&str>) -> Result<Output, Failure> {
    if let Some(f) = filter {
        if !suite::check_names().any(|n| n.contains(f)) {
            let names: Vec<_> = suite::check_names().collect();
            return Err(Failure::Usage(format!("--filter: no check matches `{f}` (checks: {})", names.join(", "))));
        }
    }
    let rows = suite::run_suite(filter);
    let mut text = String::new();
    for r in &rows {
        let _ = writeln!(text, "{:<17} {}", r.status.to_string(), r.name);
        for d in &r.details {
            let _ = writeln!(text, "    {d}");
        }
        eprintln!("{}: {:.3}s", r.name, r.elapsed.as_secs_f64());
    }
    let failed = rows.iter().any(|r| r.status == Status::Fail);
    let out = Output {
        json: json!({ "checks": rows.iter().map(report::suite_row).collect::<Vec<_>>(), "ok": !failed }),
        text,
    };
    if failed {
        emit(cli, &out);
        return Err(Failure::Silent);
    }
    Ok(out)
}
