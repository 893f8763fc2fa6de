//! Text serialization for measures and systems.
//!
//! Measures are stored as CSV with a header row naming the kind and its
//! parameters, followed by `(exponent-or-location, mass)` rows. Numbers are
//! written as shortest round-trip decimals, so a write/read cycle reproduces
//! every binary64 value bit for bit; lattice exponents are integers and
//! therefore trivially exact. A declared row count makes truncation
//! detectable.

use std::fmt::Write as _;
use std::fs;
use std::path::Path;

use crate::error::{Error, Result};
use crate::measure::{Atom, LatticeMeasure, LogGrid, Measure, StieltjesMeasure};
use crate::systems::GNumberSystem;

fn header_fields(line: &str, expect: &str) -> Result<Vec<(String, String)>> {
    let line = line.trim_end();
    let mut parts = line.split(',');
    let tag = parts.next().unwrap_or("");
    if tag != expect {
        return Err(Error::CorruptFile(format!("expected `{expect}` header, found `{tag}`")));
    }
    parts
        .map(|kv| {
            let (k, v) = kv
                .split_once('=')
                .ok_or_else(|| Error::CorruptFile(format!("bad header field `{kv}`")))?;
            Ok((k.to_string(), v.to_string()))
        })
        .collect()
}

fn field<'a>(fields: &'a [(String, String)], key: &str) -> Result<&'a str> {
    fields
        .iter()
        .find(|(k, _)| k == key)
        .map(|(_, v)| v.as_str())
        .ok_or_else(|| Error::CorruptFile(format!("missing header field `{key}`")))
}

fn parse<T: std::str::FromStr>(s: &str, what: &str) -> Result<T> {
    s.parse()
        .map_err(|_| Error::CorruptFile(format!("unparseable {what}: `{s}`")))
}

pub fn format_measure(m: &Measure) -> String {
    let mut out = String::new();
    match m {
        Measure::Lattice(l) => {
            writeln!(
                out,
                "measure,kind=lattice,base={},denom={},max_exponent={},rows={}",
                l.base(),
                l.denom(),
                l.max_exponent(),
                l.coeffs().len()
            )
            .unwrap();
            for &(e, w) in l.coeffs() {
                writeln!(out, "{e},{w}").unwrap();
            }
        }
        Measure::Stieltjes(s) => {
            let grid_rows = s.density().map_or(0, |g| g.len());
            writeln!(
                out,
                "measure,kind=stieltjes,cutoff={},rows={},grid_step={},grid_rows={}",
                s.cutoff(),
                s.atoms().len(),
                s.density().map_or(0.0, |g| g.step()),
                grid_rows
            )
            .unwrap();
            for a in s.atoms() {
                writeln!(out, "{},{}", a.location, a.mass).unwrap();
            }
            if let Some(g) = s.density() {
                for &w in g.masses() {
                    writeln!(out, "{w}").unwrap();
                }
            }
        }
    }
    out
}

pub fn parse_measure(lines: &mut std::str::Lines<'_>) -> Result<Measure> {
    let header = lines
        .next()
        .ok_or_else(|| Error::CorruptFile("missing measure header".into()))?;
    let fields = header_fields(header, "measure")?;
    match field(&fields, "kind")? {
        "lattice" => {
            let base: f64 = parse(field(&fields, "base")?, "base")?;
            let denom: u32 = parse(field(&fields, "denom")?, "denom")?;
            let max_exponent: u32 = parse(field(&fields, "max_exponent")?, "max_exponent")?;
            let rows: usize = parse(field(&fields, "rows")?, "row count")?;
            let mut coeffs = Vec::with_capacity(rows);
            for _ in 0..rows {
                let line = lines
                    .next()
                    .ok_or_else(|| Error::CorruptFile("lattice rows truncated".into()))?;
                let (e, w) = line
                    .split_once(',')
                    .ok_or_else(|| Error::CorruptFile(format!("bad lattice row `{line}`")))?;
                coeffs.push((parse::<u32>(e, "exponent")?, parse::<f64>(w, "mass")?));
            }
            Ok(LatticeMeasure::new(base, denom, max_exponent, coeffs)?.into())
        }
        "stieltjes" => {
            let cutoff: f64 = parse(field(&fields, "cutoff")?, "cutoff")?;
            let rows: usize = parse(field(&fields, "rows")?, "row count")?;
            let grid_step: f64 = parse(field(&fields, "grid_step")?, "grid step")?;
            let grid_rows: usize = parse(field(&fields, "grid_rows")?, "grid row count")?;
            let mut atoms = Vec::with_capacity(rows);
            for _ in 0..rows {
                let line = lines
                    .next()
                    .ok_or_else(|| Error::CorruptFile("atom rows truncated".into()))?;
                let (l, w) = line
                    .split_once(',')
                    .ok_or_else(|| Error::CorruptFile(format!("bad atom row `{line}`")))?;
                atoms.push(Atom {
                    location: parse(l, "location")?,
                    mass: parse(w, "mass")?,
                });
            }
            let density = if grid_rows > 0 {
                let mut masses = Vec::with_capacity(grid_rows);
                for _ in 0..grid_rows {
                    let line = lines
                        .next()
                        .ok_or_else(|| Error::CorruptFile("grid rows truncated".into()))?;
                    masses.push(parse::<f64>(line.trim_end(), "grid mass")?);
                }
                Some(LogGrid::new(grid_step, masses)?)
            } else {
                None
            };
            Ok(StieltjesMeasure::new(atoms, density, cutoff)?.into())
        }
        other => Err(Error::CorruptFile(format!("unknown measure kind `{other}`"))),
    }
}

pub fn write_measure(path: &Path, m: &Measure) -> Result<()> {
    fs::write(path, format_measure(m))?;
    Ok(())
}

pub fn read_measure(path: &Path) -> Result<Measure> {
    let text = fs::read_to_string(path)?;
    parse_measure(&mut text.lines())
}

/// Persist a full system: one file with a system header followed by the
/// prime, integer and Moebius measure blocks.
pub fn save_system(sys: &GNumberSystem, path: &Path) -> Result<()> {
    if sys.label.contains(',') || sys.label.contains('\n') {
        return Err(Error::Config(format!("label `{}` not storable", sys.label)));
    }
    let mut out = String::new();
    writeln!(
        out,
        "system,version=1,label={},cutoff={},density_a={}",
        sys.label,
        sys.cutoff,
        sys.density_a.map_or("none".to_string(), |a| a.to_string())
    )
    .unwrap();
    out.push_str(&format_measure(&sys.pi));
    out.push_str(&format_measure(&sys.n));
    out.push_str(&format_measure(&sys.m));
    fs::write(path, out)?;
    Ok(())
}

pub fn load_system(path: &Path) -> Result<GNumberSystem> {
    let text = fs::read_to_string(path)?;
    let mut lines = text.lines();
    let header = lines
        .next()
        .ok_or_else(|| Error::CorruptFile("empty system file".into()))?;
    let fields = header_fields(header, "system")?;
    let version = field(&fields, "version")?;
    if version != "1" {
        return Err(Error::CorruptFile(format!("unsupported version `{version}`")));
    }
    let label = field(&fields, "label")?.to_string();
    let cutoff: f64 = parse(field(&fields, "cutoff")?, "cutoff")?;
    let density_a = match field(&fields, "density_a")? {
        "none" => None,
        v => Some(parse::<f64>(v, "density_a")?),
    };
    let pi = parse_measure(&mut lines)?;
    let n = parse_measure(&mut lines)?;
    let m = parse_measure(&mut lines)?;
    let psi = pi.log_weight();
    Ok(GNumberSystem { label, pi, n, m, psi, density_a, cutoff })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::systems::{build_classical, build_example1};

    #[test]
    fn lattice_round_trip_is_bit_exact() {
        let sys = build_example1(80).unwrap();
        let dir = std::env::temp_dir().join("beurling-io-test-lattice");
        fs::create_dir_all(&dir).unwrap();
        let path = dir.join("pi.csv");
        write_measure(&path, &sys.pi).unwrap();
        let back = read_measure(&path).unwrap();
        match (&sys.pi, &back) {
            (Measure::Lattice(a), Measure::Lattice(b)) => assert_eq!(a, b),
            _ => panic!("kind changed in round trip"),
        }
    }

    #[test]
    fn system_round_trip_preserves_mertens() {
        let sys = build_classical(500.0).unwrap();
        let dir = std::env::temp_dir().join("beurling-io-test-system");
        fs::create_dir_all(&dir).unwrap();
        let path = dir.join("classical.sys");
        save_system(&sys, &path).unwrap();
        let back = load_system(&path).unwrap();
        assert_eq!(back.label, "classical");
        assert_eq!(back.density_a, Some(1.0));
        for &x in &[10.0, 100.0, 499.0] {
            assert_eq!(back.mertens(x).unwrap(), sys.mertens(x).unwrap());
            assert_eq!(back.integers(x).unwrap(), sys.integers(x).unwrap());
        }
    }

    #[test]
    fn truncated_file_is_rejected() {
        let sys = build_example1(40).unwrap();
        let dir = std::env::temp_dir().join("beurling-io-test-trunc");
        fs::create_dir_all(&dir).unwrap();
        let path = dir.join("sys.csv");
        save_system(&sys, &path).unwrap();
        let text = fs::read_to_string(&path).unwrap();
        let cut: String = text.lines().take(text.lines().count() - 3).collect::<Vec<_>>().join("\n");
        fs::write(&path, cut).unwrap();
        assert!(matches!(load_system(&path), Err(Error::CorruptFile(_))));
    }
}
