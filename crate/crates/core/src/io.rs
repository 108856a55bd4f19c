//! Grid files, tables and key=value configuration text.
//!
//! CSV fields carry a `# key=value` header followed by `x,k,re,im` rows in
//! x-major order. Floats are written in shortest round-trip form, so the
//! text format is exact as well. The binary layout is
//! `XWIG1`, u32 nx, u32 nk, nx+nk f64 axis samples, nx·nk (re, im) f64 pairs,
//! all little-endian, followed by a one-byte provenance tag.

use crate::crosswigner::{PhaseSpaceField, Provenance};
use crate::grid::Axis;
use crate::{Complex64, Error, Result};
use std::fs;
use std::io::{BufRead, BufReader, BufWriter, Write};
use std::path::Path;

pub const MAGIC: &[u8; 5] = b"XWIG1";

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Format {
    Csv,
    Bin,
}

impl Format {
    pub fn extension(self) -> &'static str {
        match self {
            Format::Csv => "csv",
            Format::Bin => "bin",
        }
    }
}

impl std::str::FromStr for Format {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        match s {
            "csv" => Ok(Format::Csv),
            "bin" => Ok(Format::Bin),
            other => Err(Error::config("format", format!("expected csv or bin, got '{other}'"))),
        }
    }
}

/// Ordered `key=value` pairs written into file headers.
pub type Meta = Vec<(String, String)>;

fn io_err(path: &Path) -> impl FnOnce(std::io::Error) -> Error + '_ {
    move |source| Error::Io {
        path: path.to_path_buf(),
        source,
    }
}

fn format_err(path: &Path, reason: impl Into<String>) -> Error {
    Error::Format {
        path: path.to_path_buf(),
        reason: reason.into(),
    }
}

fn write_header(w: &mut impl Write, meta: &[(String, String)]) -> std::io::Result<()> {
    for (k, v) in meta {
        writeln!(w, "# {k}={v}")?;
    }
    Ok(())
}

fn field_meta(field: &PhaseSpaceField, extra: &[(String, String)]) -> Meta {
    let mut m: Meta = vec![
        ("format".into(), "xwigner-field".into()),
        ("provenance".into(), field.provenance.to_string()),
        ("units".into(), "x=m,k=1/m".into()),
        ("nx".into(), field.nx().to_string()),
        ("nk".into(), field.nk().to_string()),
        ("x_lo".into(), field.x_axis.lo().to_string()),
        ("x_hi".into(), field.x_axis.hi().to_string()),
        ("k_lo".into(), field.k_axis.lo().to_string()),
        ("k_hi".into(), field.k_axis.hi().to_string()),
    ];
    for (k, v) in extra {
        if !m.iter().any(|(mk, _)| mk == k) {
            m.push((k.clone(), v.clone()));
        }
    }
    m
}

pub fn write_field_csv(w: &mut impl Write, field: &PhaseSpaceField, meta: &[(String, String)]) -> std::io::Result<()> {
    write_header(w, &field_meta(field, meta))?;
    writeln!(w, "x,k,re,im")?;
    for i in 0..field.nx() {
        let x = field.x_axis.value(i);
        for j in 0..field.nk() {
            let v = field.get(i, j);
            writeln!(w, "{x:?},{:?},{:?},{:?}", field.k_axis.value(j), v.re, v.im)?;
        }
    }
    Ok(())
}

pub fn write_field_bin(w: &mut impl Write, field: &PhaseSpaceField) -> std::io::Result<()> {
    w.write_all(MAGIC)?;
    w.write_all(&(field.nx() as u32).to_le_bytes())?;
    w.write_all(&(field.nk() as u32).to_le_bytes())?;
    for x in field.x_axis.values().into_iter().chain(field.k_axis.values()) {
        w.write_all(&x.to_le_bytes())?;
    }
    for v in &field.values {
        w.write_all(&v.re.to_le_bytes())?;
        w.write_all(&v.im.to_le_bytes())?;
    }
    w.write_all(&[provenance_tag(field.provenance)])
}

fn provenance_tag(p: Provenance) -> u8 {
    match p {
        Provenance::Analytic => 0,
        Provenance::Oracle => 1,
        Provenance::Reconstructed => 2,
    }
}

pub fn save_field(path: &Path, field: &PhaseSpaceField, format: Format, meta: &[(String, String)]) -> Result<()> {
    let file = fs::File::create(path).map_err(io_err(path))?;
    let mut w = BufWriter::new(file);
    match format {
        Format::Csv => write_field_csv(&mut w, field, meta),
        Format::Bin => write_field_bin(&mut w, field),
    }
    .and_then(|_| w.flush())
    .map_err(io_err(path))
}

/// Read a field in either format; the metadata is empty for binary files.
pub fn load_field(path: &Path) -> Result<(PhaseSpaceField, Meta)> {
    let bytes = fs::read(path).map_err(io_err(path))?;
    if bytes.starts_with(MAGIC) {
        Ok((parse_field_bin(path, &bytes)?, Vec::new()))
    } else {
        parse_field_csv(path, &bytes)
    }
}

fn parse_field_bin(path: &Path, bytes: &[u8]) -> Result<PhaseSpaceField> {
    let mut pos = MAGIC.len();
    let mut take = |n: usize| -> Result<&[u8]> {
        let s = bytes.get(pos..pos + n).ok_or_else(|| format_err(path, "truncated binary field"))?;
        pos += n;
        Ok(s)
    };
    let nx = u32::from_le_bytes(take(4)?.try_into().unwrap()) as usize;
    let nk = u32::from_le_bytes(take(4)?.try_into().unwrap()) as usize;
    let mut f64s = |n: usize| -> Result<Vec<f64>> {
        let raw = take(8 * n)?;
        Ok(raw.chunks_exact(8).map(|c| f64::from_le_bytes(c.try_into().unwrap())).collect())
    };
    let xs = f64s(nx)?;
    let ks = f64s(nk)?;
    let vals = f64s(2 * nx * nk)?;
    let tag = take(1).map(|b| b[0]).unwrap_or(0);
    let provenance = match tag {
        0 => Provenance::Analytic,
        1 => Provenance::Oracle,
        2 => Provenance::Reconstructed,
        t => return Err(format_err(path, format!("unknown provenance tag {t}"))),
    };
    let x_axis = Axis::from_values(&xs).map_err(|e| format_err(path, e.to_string()))?;
    let k_axis = Axis::from_values(&ks).map_err(|e| format_err(path, e.to_string()))?;
    let values = vals.chunks_exact(2).map(|c| Complex64::new(c[0], c[1])).collect();
    PhaseSpaceField::new(x_axis, k_axis, values, provenance).map_err(|e| format_err(path, e.to_string()))
}

fn lookup<'a>(meta: &'a [(String, String)], path: &Path, key: &str) -> Result<&'a str> {
    meta.iter()
        .find(|(k, _)| k == key)
        .map(|(_, v)| v.as_str())
        .ok_or_else(|| format_err(path, format!("missing header key '{key}'")))
}

fn parse_num<T: std::str::FromStr>(path: &Path, what: &str, s: &str) -> Result<T> {
    s.trim().parse().map_err(|_| format_err(path, format!("bad {what} '{s}'")))
}

fn parse_field_csv(path: &Path, bytes: &[u8]) -> Result<(PhaseSpaceField, Meta)> {
    let text = std::str::from_utf8(bytes).map_err(|_| format_err(path, "not utf-8"))?;
    let mut lines = text.lines();
    let mut meta = Meta::new();
    let mut columns = None;
    for line in lines.by_ref() {
        if let Some(h) = line.strip_prefix('#') {
            if let Some((k, v)) = h.trim().split_once('=') {
                meta.push((k.trim().to_string(), v.trim().to_string()));
            }
        } else {
            columns = Some(line);
            break;
        }
    }
    if columns.map(str::trim) != Some("x,k,re,im") {
        return Err(format_err(path, "expected column header 'x,k,re,im'"));
    }
    let nx: usize = parse_num(path, "nx", lookup(&meta, path, "nx")?)?;
    let nk: usize = parse_num(path, "nk", lookup(&meta, path, "nk")?)?;
    let axis = |lo: &str, hi: &str, n: usize| -> Result<Axis> {
        let lo = parse_num(path, lo, lookup(&meta, path, lo)?)?;
        let hi = parse_num(path, hi, lookup(&meta, path, hi)?)?;
        Axis::new(lo, hi, n).map_err(|e| format_err(path, e.to_string()))
    };
    let x_axis = axis("x_lo", "x_hi", nx)?;
    let k_axis = axis("k_lo", "k_hi", nk)?;
    let provenance: Provenance = lookup(&meta, path, "provenance")?.parse().map_err(|e: String| format_err(path, e))?;

    let mut values = Vec::with_capacity(nx * nk);
    for (n, line) in lines.filter(|l| !l.trim().is_empty()).enumerate() {
        let cols: Vec<&str> = line.split(',').collect();
        if cols.len() != 4 {
            return Err(format_err(path, format!("row {n}: expected 4 columns")));
        }
        let (i, j) = (n / nk.max(1), n % nk.max(1));
        let x: f64 = parse_num(path, "x", cols[0])?;
        let k: f64 = parse_num(path, "k", cols[1])?;
        if i >= nx || x != x_axis.value(i) || k != k_axis.value(j) {
            return Err(format_err(path, format!("row {n}: coordinates do not match the header axes")));
        }
        values.push(Complex64::new(parse_num(path, "re", cols[2])?, parse_num(path, "im", cols[3])?));
    }
    let field = PhaseSpaceField::new(x_axis, k_axis, values, provenance).map_err(|e| format_err(path, e.to_string()))?;
    Ok((field, meta))
}

/// Column table with a metadata header, one row per line.
pub fn save_table(path: &Path, meta: &[(String, String)], columns: &[&str], rows: &[Vec<f64>]) -> Result<()> {
    let file = fs::File::create(path).map_err(io_err(path))?;
    let mut w = BufWriter::new(file);
    (|| -> std::io::Result<()> {
        write_header(&mut w, meta)?;
        writeln!(w, "{}", columns.join(","))?;
        for r in rows {
            let cells: Vec<String> = r.iter().map(|v| format!("{v:?}")).collect();
            writeln!(w, "{}", cells.join(","))?;
        }
        w.flush()
    })()
    .map_err(io_err(path))
}

pub fn load_table(path: &Path) -> Result<(Meta, Vec<String>, Vec<Vec<f64>>)> {
    let file = fs::File::open(path).map_err(io_err(path))?;
    let mut meta = Meta::new();
    let mut columns = Vec::new();
    let mut rows = Vec::new();
    for line in BufReader::new(file).lines() {
        let line = line.map_err(io_err(path))?;
        if let Some(h) = line.strip_prefix('#') {
            if let Some((k, v)) = h.trim().split_once('=') {
                meta.push((k.trim().to_string(), v.trim().to_string()));
            }
        } else if columns.is_empty() {
            columns = line.split(',').map(str::to_string).collect();
        } else if !line.trim().is_empty() {
            let r = line.split(',').map(|c| parse_num(path, "cell", c)).collect::<Result<Vec<f64>>>()?;
            if r.len() != columns.len() {
                return Err(format_err(path, "ragged row"));
            }
            rows.push(r);
        }
    }
    Ok((meta, columns, rows))
}

/// Flat `key = value` text; `#` starts a comment, blank lines are skipped.
pub fn parse_key_values(text: &str) -> Result<Meta> {
    let mut out = Meta::new();
    for (n, raw) in text.lines().enumerate() {
        let line = raw.split('#').next().unwrap_or("").trim();
        if line.is_empty() {
            continue;
        }
        let (k, v) = line
            .split_once('=')
            .ok_or_else(|| Error::config(format!("line {}", n + 1), format!("expected key=value, got '{line}'")))?;
        out.push((k.trim().to_string(), v.trim().to_string()));
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn field() -> PhaseSpaceField {
        let x = Axis::new(-3.1e-5, 2.7e-5, 7).unwrap();
        let k = Axis::symmetric(1.0 / 3.0e5, 5).unwrap();
        PhaseSpaceField::from_fn(x, k, Provenance::Oracle, |x, k| Complex64::new((x * 1e5).sin() / 7.0, k * 1e-6 + 0.1))
    }

    #[test]
    fn binary_exact() {
        let f = field();
        let mut buf = Vec::new();
        write_field_bin(&mut buf, &f).unwrap();
        assert_eq!(&buf[..5], b"XWIG1");
        assert_eq!(buf.len(), 5 + 8 + 8 * 12 + 16 * 35 + 1);
        let g = parse_field_bin(Path::new("mem"), &buf).unwrap();
        assert_eq!(f, g);
    }

    #[test]
    fn csv_exact() {
        let f = field();
        let mut buf = Vec::new();
        write_field_csv(&mut buf, &f, &[("run_id".into(), "r7".into())]).unwrap();
        let (g, meta) = parse_field_csv(Path::new("mem"), &buf).unwrap();
        assert_eq!(f, g);
        assert!(meta.contains(&("run_id".to_string(), "r7".to_string())));
    }

    #[test]
    fn truncated_binary() {
        let mut buf = Vec::new();
        write_field_bin(&mut buf, &field()).unwrap();
        buf.truncate(100);
        assert!(matches!(parse_field_bin(Path::new("mem"), &buf), Err(Error::Format { .. })));
    }

    #[test]
    fn key_values() {
        let kv = parse_key_values("# neutron\ngamma = -1\n\nsigma0=7.8 # um\n").unwrap();
        assert_eq!(kv, vec![("gamma".into(), "-1".into()), ("sigma0".into(), "7.8".into())]);
        assert!(parse_key_values("gamma -1").is_err());
    }
}
