//! Exact positive-geometry commands over the rationals.

use std::path::Path;

use tvamp_core::posgeom::{
    all_polygon_triangulations, amplituhedron_point, bracket_signs, hypersimplex_contains, is_totally_nonneg,
    is_totally_positive, jacobian_rank, maximal_minors, moment_map, pluecker, polygon_canonical_form,
};
use tvamp_core::{PosGeomError, Rational, RationalMatrix};

use crate::input::{read, CliError};
use crate::report::{Record, Report};
use crate::AmpCommand;

fn load(path: &Path, role: &str, report: &mut Report) -> Result<RationalMatrix, CliError> {
    RationalMatrix::parse(&read(path, role, report)?).map_err(|e| CliError::parse(path, e))
}

fn invalid(e: impl std::fmt::Display) -> CliError {
    CliError::Invalid(e.to_string())
}

/// Geometry errors with rows renumbered from 1, matching the CLI input.
fn geometry(e: PosGeomError) -> CliError {
    match e {
        PosGeomError::PointOnBoundary { i, j } => invalid(format!("Y lies on the side through Z rows {} and {}", i + 1, j + 1)),
        PosGeomError::SpuriousPole { i, j } => invalid(format!(
            "Y lies on the diagonal through Z rows {} and {} of the chosen triangulation",
            i + 1,
            j + 1
        )),
        other => invalid(other),
    }
}

fn one_based(indices: &[usize]) -> String {
    indices.iter().map(|i| (i + 1).to_string()).collect::<Vec<_>>().join(",")
}

/// Parses 1-based triangles such as `1,2,3;1,3,4`.
pub fn parse_triangles(text: &str) -> Result<Vec<[usize; 3]>, CliError> {
    text.split(';')
        .map(|tri| {
            let corners: Vec<usize> = tri
                .split(',')
                .map(|x| match x.trim().parse::<usize>() {
                    Ok(v) if v >= 1 => Ok(v - 1),
                    _ => Err(invalid(format!("bad triangle corner `{}` in `{text}`", x.trim()))),
                })
                .collect::<Result<_, _>>()?;
            <[usize; 3]>::try_from(corners).map_err(|_| invalid(format!("`{tri}` is not a triangle")))
        })
        .collect()
}

fn fan(n: usize) -> Vec<[usize; 3]> {
    (1..n.saturating_sub(1)).map(|i| [0, i, i + 1]).collect()
}

/// Canonical form over the fan triangulation, with inputs recorded.
pub fn fan_polygon_form(z: &Path, y: &Path, report: &mut Report) -> Result<Rational, CliError> {
    let zm = load(z, "z", report)?;
    let ym = load(y, "y", report)?;
    polygon_canonical_form(&zm, &fan(zm.rows()), &ym).map_err(geometry)
}

pub fn run(cmd: &AmpCommand, report: &mut Report) -> Result<(), CliError> {
    match cmd {
        AmpCommand::Pluecker { file } => {
            let c = load(file, "c", report)?;
            let p = pluecker(&c).map_err(geometry)?;
            report.push(Record::new("pluecker").field("k", p.k).field("n", p.n));
            for (s, v) in &p.coords {
                report.push(Record::new("p").field("indices", one_based(s)).field("value", v));
            }
            let (checked, violated) = p.three_term_relations();
            report.push_check(
                Record::new("pluecker-relations").field("checked", checked).field("violated", violated),
                violated == 0,
                0.0,
            );
        }
        AmpCommand::Positive { file } => {
            let m = load(file, "matrix", report)?;
            let minors = maximal_minors(&m);
            let count = |f: &dyn Fn(&Rational) -> bool| minors.iter().filter(|(_, d)| f(d)).count();
            report.push(
                Record::new("positive")
                    .field("rows", m.rows())
                    .field("cols", m.cols())
                    .field("minors", minors.len())
                    .field("positive", count(&|d| *d > Rational::from_integer(0.into())))
                    .field("zero", count(&|d| *d == Rational::from_integer(0.into())))
                    .field("totally_positive", is_totally_positive(&m))
                    .field("totally_nonneg", is_totally_nonneg(&m)),
            );
        }
        AmpCommand::Map { c, z } => {
            let cm = load(c, "c", report)?;
            let zm = load(z, "z", report)?;
            let y = amplituhedron_point(&cm, &zm).map_err(geometry)?;
            let k = cm.rows();
            let m = zm.cols() - k;
            report.push(
                Record::new("map")
                    .field("k", k)
                    .field("n", cm.cols())
                    .field("m", m)
                    .field("c_nonneg", is_totally_nonneg(&cm))
                    .field("z_positive", is_totally_positive(&zm)),
            );
            for i in 0..y.rows() {
                let row: Vec<String> = y.row(i).iter().map(ToString::to_string).collect();
                report.push(Record::new("y").field("row", i + 1).field("values", row.join(",")));
            }
            let signs = bracket_signs(&y, &zm).map_err(geometry)?;
            report.push(
                Record::new("brackets")
                    .field("positive", signs.iter().filter(|&&s| s > 0).count())
                    .field("negative", signs.iter().filter(|&&s| s < 0).count())
                    .field("zero", signs.iter().filter(|&&s| s == 0).count()),
            );
            let rank = jacobian_rank(&cm, &zm).map_err(geometry)?;
            report.push(Record::new("jacobian").field("rank", rank).field("km", k * m));
        }
        AmpCommand::MomentMap { c } => {
            let cm = load(c, "c", report)?;
            let mu = moment_map(&cm).map_err(geometry)?;
            for (i, v) in mu.iter().enumerate() {
                report.push(Record::new("mu").field("i", i + 1).field("value", v));
            }
            report.push_check(
                Record::new("hypersimplex").field("k", cm.rows()).field("n", cm.cols()),
                hypersimplex_contains(&mu, cm.rows()),
                0.0,
            );
        }
        AmpCommand::PolygonForm { z, y, triangulation, all } => {
            let zm = load(z, "z", report)?;
            let ym = load(y, "y", report)?;
            let n = zm.rows();
            let tris = match triangulation {
                Some(text) => parse_triangles(text)?,
                None => fan(n),
            };
            let value = polygon_canonical_form(&zm, &tris, &ym).map_err(geometry)?;
            report.push(Record::new("polygon-form").field("n", n).field("value", &value));
            if *all {
                let mut distinct: Vec<Rational> = Vec::new();
                let mut skipped = 0;
                let every = all_polygon_triangulations(n);
                for t in &every {
                    match polygon_canonical_form(&zm, t, &ym) {
                        Ok(v) if !distinct.contains(&v) => distinct.push(v),
                        Ok(_) => {}
                        // Y on a diagonal of this triangulation only
                        Err(PosGeomError::SpuriousPole { .. }) => skipped += 1,
                        Err(e) => return Err(geometry(e)),
                    }
                }
                report.push_check(
                    Record::new("triangulation-independence")
                        .field("triangulations", every.len())
                        .field("skipped", skipped)
                        .field("distinct_values", distinct.len()),
                    distinct.len() == 1 && distinct[0] == value,
                    0.0,
                );
            }
        }
    }
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn triangle_specs() {
        assert_eq!(parse_triangles("1,2,3;1,3,4").unwrap(), vec![[0, 1, 2], [0, 2, 3]]);
        assert!(parse_triangles("1,2").is_err());
        assert!(parse_triangles("0,1,2").is_err());
        assert_eq!(fan(5), vec![[0, 1, 2], [0, 2, 3], [0, 3, 4]]);
    }
}
