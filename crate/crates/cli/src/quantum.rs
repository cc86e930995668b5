//! Floating point commands: recoupling, spin networks, TV, Pachner moves,
//! the TV operator and surgery.

use std::path::Path;

use num_complex::Complex;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use tvamp_core::recoupling::{orthogonality_sweep, pentagon_sweep};
use tvamp_core::scalar::complex_abs;
use tvamp_core::spinnet::Evaluator;
use tvamp_core::surgery::{compare_tv_rt, rt_invariant};
use tvamp_core::triangulate::{random_moves, tv_boundary_operator, tv_invariant, Move};
use tvamp_core::{
    Color, FramedSurgery, Real, RecouplingTable, RootParams, SpinGraph, SurfaceTriangulation, Triangulation,
};

use crate::input::{read, sha256_hex, CliError};
use crate::report::{Record, Report};
use crate::{amp, CheckCommand, Cli, Command, MoveKind, RecouplingCommand, SpinnetCommand, TableFormat};

const IDENTITY_TOLERANCE: f64 = 1e-10;
const INVARIANCE_TOLERANCE: f64 = 1e-8;
const PROJECTOR_TOLERANCE: f64 = 1e-8;
const RANK_TOLERANCE: f64 = 1e-8;

fn params<T: Real>(cli: &Cli) -> Result<RootParams<T>, CliError> {
    let r = cli.r.ok_or_else(|| CliError::Invalid("this command needs --r".into()))?;
    RootParams::new(r).map_err(|e| CliError::Invalid(e.to_string()))
}

fn load_triangulation(path: &Path, report: &mut Report) -> Result<Triangulation, CliError> {
    Triangulation::parse(&read(path, "triangulation", report)?).map_err(|e| CliError::parse(path, e))
}

fn shape(kind: &str, t: &Triangulation) -> Record {
    Record::new(kind)
        .field("tets", t.num_tets())
        .field("vertices", t.num_vertices())
        .field("edges", t.num_edges())
        .field("triangles", t.num_triangles())
}

fn tv_value<T: Real>(t: &Triangulation, p: &RootParams<T>, path: &Path) -> Result<T, CliError> {
    Ok(tv_invariant(t, p).map_err(|e| CliError::parse(path, e))?.value)
}

fn complex_fields<T: Real>(record: Record, name: &str, z: Complex<T>) -> Record {
    record.field(&format!("{name}_re"), z.re).field(&format!("{name}_im"), z.im)
}

pub fn run<T: Real>(cli: &Cli, report: &mut Report) -> Result<(), CliError> {
    match &cli.command {
        Command::Recoupling(RecouplingCommand::Table { format, check }) => table::<T>(cli, *format, *check, report),
        Command::Spinnet(SpinnetCommand::Eval { file, max_depth }) => {
            let p = params::<T>(cli)?;
            let g = SpinGraph::parse(&read(file, "spinnet", report)?).map_err(|e| CliError::parse(file, e))?;
            let value = Evaluator::new(RecouplingTable::new(p))
                .with_max_depth(*max_depth)
                .evaluate(&g)
                .map_err(|e| CliError::parse(file, e))?;
            report.push(
                Record::new("spinnet")
                    .field("r", p.r())
                    .field("vertices", g.num_vertices())
                    .field("edges", g.num_edges())
                    .field("loops", g.free_loops().len())
                    .field("value", value),
            );
            Ok(())
        }
        Command::Tv { file, report_colorings } => {
            let p = params::<T>(cli)?;
            let t = load_triangulation(file, report)?;
            let sum = tv_invariant(&t, &p).map_err(|e| CliError::parse(file, e))?;
            let mut rec = shape("tv", &t).field("r", p.r()).field("value", sum.value);
            if *report_colorings {
                rec = rec.field("colorings", sum.stats.leaves).field("visited", sum.stats.visited);
            }
            report.push(rec);
            Ok(())
        }
        Command::Pachner { file, kind, at, random, check_tv, output } => {
            let t = load_triangulation(file, report)?;
            let (result, moves) = match (kind, at, random) {
                (Some(kind), Some(at), _) => {
                    let m = match kind {
                        MoveKind::TwoThree => Move::TwoThree { triangle: *at },
                        MoveKind::OneFour => Move::OneFour { tet: *at },
                    };
                    (t.apply(m).map_err(|e| CliError::Invalid(e.to_string()))?, vec![m])
                }
                (_, _, Some(n)) => random_moves(&t, *n, &mut ChaCha8Rng::seed_from_u64(cli.seed)),
                _ => return Err(CliError::Invalid("pachner needs --move with --at, or --random".into())),
            };
            let moves: Vec<String> = moves.iter().map(Move::to_string).collect();
            let text = result.to_text();
            report.push(shape("pachner", &result).field("moves", moves.join(",")).field("sha256", sha256_hex(text.as_bytes())));
            if *check_tv {
                let p = params::<T>(cli)?;
                let before = tv_value(&t, &p, file)?;
                let after = tv_value(&result, &p, file)?;
                let diff = (after - before).abs().lossy_f64();
                report.push_check(
                    Record::new("pachner-tv").field("r", p.r()).field("before", before).field("after", after).field("difference", format!("{diff:.3e}")),
                    diff <= INVARIANCE_TOLERANCE,
                    INVARIANCE_TOLERANCE,
                );
            }
            if let Some(out) = output {
                std::fs::write(out, text).map_err(|e| CliError::Io { path: out.clone(), source: e })?;
            }
            Ok(())
        }
        Command::Tvcode { surface, check_projector, expect_rank } => {
            let p = params::<T>(cli)?;
            let s = SurfaceTriangulation::parse(&read(surface, "surface", report)?).map_err(|e| CliError::parse(surface, e))?;
            let op = tv_boundary_operator(&s, &p);
            let rank = op.rank(RANK_TOLERANCE);
            report.push(complex_fields(
                Record::new("tvcode")
                    .field("r", p.r())
                    .field("genus", s.genus())
                    .field("vertices", s.num_vertices())
                    .field("edges", s.num_edges())
                    .field("triangles", s.num_triangles())
                    .field("dimension", op.dimension())
                    .field("rank", rank)
                    .field("colorings", op.stats.leaves),
                "trace",
                op.trace(),
            ));
            if *check_projector {
                let idem = op.idempotence_defect();
                let sym = op.symmetry_defect();
                report.push_check(
                    Record::new("projector").field("idempotence_defect", format!("{idem:.3e}")).field("symmetry_defect", format!("{sym:.3e}")),
                    idem <= PROJECTOR_TOLERANCE && sym <= PROJECTOR_TOLERANCE,
                    PROJECTOR_TOLERANCE,
                );
            }
            if let Some(want) = expect_rank {
                report.push_check(Record::new("rank").field("rank", rank).field("expected", want), rank == *want, RANK_TOLERANCE);
            }
            Ok(())
        }
        Command::Rt { surgery } => {
            let p = params::<T>(cli)?;
            report.push(rt_record(surgery, &p));
            let kappa = complex_abs(p.kappa()).lossy_f64();
            report.push(Record::new("normalization").field("eta", p.eta()).field("kappa_abs", kappa));
            Ok(())
        }
        Command::Check(CheckCommand::TvRt { triangulation, surgery }) => {
            let p = params::<T>(cli)?;
            let t = load_triangulation(triangulation, report)?;
            let tv = tv_value(&t, &p, triangulation)?;
            let cmp = compare_tv_rt(tv, surgery, &p);
            report.push_check(
                complex_fields(Record::new("tv-rt").field("r", p.r()).field("surgery", surgery).field("tv", cmp.tv), "rt", cmp.rt)
                    .field("rt_abs_sq", cmp.rt_abs_sq)
                    .field("difference", format!("{:.3e}", cmp.difference)),
                cmp.pass,
                cmp.tolerance,
            );
            Ok(())
        }
        Command::Check(CheckCommand::Thm2 { triangulation, z, y }) => {
            let p = params::<T>(cli)?;
            let t = load_triangulation(triangulation, report)?;
            let tv = tv_value(&t, &p, triangulation)?;
            let form = amp::fan_polygon_form(z, y, report)?;
            report.push(complex_fields(Record::new("thm2").field("r", p.r()).field("level", p.r() - 2), "q", p.q()));
            report.push(Record::new("thm2-side").field("side", "tv").field("value", tv));
            report.push(Record::new("thm2-side").field("side", "canonical-form").field("value", form));
            report.push(Record::new("thm2-note").field(
                "note",
                "values are computed side by side; no map between tetrahedra and positroid cells is constructed",
            ));
            Ok(())
        }
        Command::Amp(_) => unreachable!("handled before precision dispatch"),
    }
}

fn rt_record<T: Real>(s: &FramedSurgery, p: &RootParams<T>) -> Record {
    let tau = rt_invariant(s, p);
    let abs = complex_abs(tau);
    complex_fields(
        Record::new("rt").field("r", p.r()).field("surgery", s).field("components", s.components()).field("signature", s.signature()),
        "tau",
        tau,
    )
    .field("abs_sq", abs * abs)
}

fn table<T: Real>(cli: &Cli, format: TableFormat, check: bool, report: &mut Report) -> Result<(), CliError> {
    let p = params::<T>(cli)?;
    let table = RecouplingTable::new(p);
    let n = table.num_colors() as Color;
    let adm = |a, b, c| table.admissible(a, b, c);
    let mut emit = |kind: &str, labels: &[Color], value: T| {
        let rec = match format {
            TableFormat::Records => {
                let names = ["a", "b", "c", "d", "e", "f"];
                let keys: &[&str] = match kind {
                    "delta" => &["c"],
                    "theta" => &names[..3],
                    _ => &["a", "b", "e", "c", "d", "f"],
                };
                let rec = keys.iter().zip(labels).fold(Record::new(kind), |r, (k, v)| r.field(k, v));
                rec.field("value", value)
            }
            TableFormat::Tsv => {
                let cols: Vec<String> = labels.iter().map(Color::to_string).chain([value.to_string()]).collect();
                Record::new(format!("{kind}\t{}", cols.join("\t")))
            }
        };
        report.push(rec);
    };
    for c in 0..n {
        emit("delta", &[c], table.delta(c));
    }
    for a in 0..n {
        for b in 0..n {
            for c in (0..n).filter(|&c| adm(a, b, c)) {
                emit("theta", &[a, b, c], table.theta(a, b, c));
            }
        }
    }
    for a in 0..n {
        for b in 0..n {
            for e in (0..n).filter(|&e| adm(a, b, e)) {
                for c in 0..n {
                    for d in (0..n).filter(|&d| adm(c, d, e)) {
                        for f in (0..n).filter(|&f| adm(a, d, f) && adm(b, c, f)) {
                            emit("tet", &[a, b, e, c, d, f], table.tet(a, b, e, c, d, f));
                            emit("fmove", &[a, b, e, c, d, f], table.fmove(a, b, c, d, e, f));
                        }
                    }
                }
            }
        }
    }
    if check {
        for (name, sweep) in [("orthogonality", orthogonality_sweep(&table)), ("pentagon", pentagon_sweep(&table))] {
            report.push_check(
                Record::new("identity")
                    .field("name", name)
                    .field("r", p.r())
                    .field("checked", sweep.checked)
                    .field("max_defect", format!("{:.3e}", sweep.max_defect)),
                sweep.max_defect <= IDENTITY_TOLERANCE,
                IDENTITY_TOLERANCE,
            );
        }
    }
    Ok(())
}
