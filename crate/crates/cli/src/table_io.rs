//! CSV persistence of effective-Hamiltonian tables.
//!
//! A file starts with `# key=value` metadata lines followed by a header row
//! `p1[,p2],hbar,converged,residual` and one row per node in lattice order.
//! Floats are written in Rust's shortest round-trip form, so reading a
//! written table reproduces every value bit for bit.

use std::collections::BTreeMap;
use std::io::{BufRead, BufReader, Read, Write};
use std::path::Path;

use effham::effective::{EffectiveTable, PGrid, Provenance};

use crate::error::{io_err, CliError, Result};

pub const SCHEMA: &str = "effham-table/1";

const RESERVED: &[&str] = &["schema", "dim", "radius", "samples", "provenance", "quasiconvex_by_theorem"];

/// A table plus free-form metadata (config hash, scale, pipeline, ...).
#[derive(Debug, Clone, PartialEq)]
pub struct TableFile {
    pub table: EffectiveTable,
    pub metadata: BTreeMap<String, String>,
}

impl TableFile {
    pub fn new(table: EffectiveTable) -> Self {
        Self {
            table,
            metadata: BTreeMap::new(),
        }
    }

    pub fn with(mut self, key: &str, value: impl ToString) -> Self {
        self.metadata.insert(key.to_string(), value.to_string());
        self
    }
}

fn bad(msg: impl Into<String>) -> CliError {
    CliError::Table(msg.into())
}

pub fn write_table<W: Write>(out: W, file: &TableFile) -> Result<()> {
    let t = &file.table;
    let pg = t.pgrid;
    let mut out = std::io::BufWriter::new(out);
    let mut header = vec![
        ("schema".to_string(), SCHEMA.to_string()),
        ("dim".to_string(), pg.dim().to_string()),
        ("radius".to_string(), format!("{:?}", pg.radius())),
        ("samples".to_string(), pg.samples().to_string()),
        ("provenance".to_string(), t.provenance.as_str().to_string()),
        ("quasiconvex_by_theorem".to_string(), t.quasiconvex_by_theorem.to_string()),
    ];
    for (k, v) in &file.metadata {
        if RESERVED.contains(&k.as_str()) || k.contains('=') || k.contains('\n') || v.contains('\n') {
            return Err(bad(format!("invalid metadata entry '{k}'")));
        }
        header.push((k.clone(), v.clone()));
    }
    let wrap = |e: std::io::Error| bad(e.to_string());
    for (k, v) in header {
        writeln!(out, "# {k}={v}").map_err(wrap)?;
    }
    let mut w = csv::Writer::from_writer(out);
    let mut cols: Vec<String> = (1..=pg.dim()).map(|i| format!("p{i}")).collect();
    cols.extend(["hbar", "converged", "residual"].map(String::from));
    w.write_record(&cols).map_err(|e| bad(e.to_string()))?;
    for k in 0..t.len() {
        let mut row: Vec<String> = pg.node(k).iter().map(|x| format!("{x:?}")).collect();
        row.push(format!("{:?}", t.values[k]));
        row.push(t.converged[k].to_string());
        row.push(format!("{:?}", t.residuals[k]));
        w.write_record(&row).map_err(|e| bad(e.to_string()))?;
    }
    w.flush().map_err(wrap)?;
    Ok(())
}

fn float(s: &str) -> Result<f64> {
    s.trim().parse().map_err(|_| bad(format!("not a number: '{s}'")))
}

pub fn read_table<R: Read>(input: R) -> Result<TableFile> {
    let mut reader = BufReader::new(input);
    let mut meta = BTreeMap::new();
    let mut line = String::new();
    let mut body = String::new();
    loop {
        line.clear();
        if reader.read_line(&mut line).map_err(|e| bad(e.to_string()))? == 0 {
            break;
        }
        match line.strip_prefix('#') {
            Some(rest) => {
                let (k, v) = rest
                    .trim()
                    .split_once('=')
                    .ok_or_else(|| bad(format!("malformed header line '{}'", line.trim_end())))?;
                meta.insert(k.trim().to_string(), v.to_string());
            }
            None => {
                body.push_str(&line);
                break;
            }
        }
    }
    reader.read_to_string(&mut body).map_err(|e| bad(e.to_string()))?;

    let mut take = |k: &str| meta.remove(k).ok_or_else(|| bad(format!("missing header key '{k}'")));
    let schema = take("schema")?;
    if schema != SCHEMA {
        return Err(bad(format!("unsupported schema '{schema}'")));
    }
    let dim: usize = take("dim")?.parse().map_err(|_| bad("bad dim"))?;
    let radius = float(&take("radius")?)?;
    let samples: usize = take("samples")?.parse().map_err(|_| bad("bad samples"))?;
    let prov = take("provenance")?;
    let provenance = Provenance::parse(&prov).ok_or_else(|| bad(format!("unknown provenance '{prov}'")))?;
    let qc: bool = take("quasiconvex_by_theorem")?.parse().map_err(|_| bad("bad quasiconvex_by_theorem"))?;
    let pgrid = PGrid::new(dim, radius, samples)?;

    let mut rdr = csv::Reader::from_reader(body.as_bytes());
    let expected: Vec<String> = (1..=dim)
        .map(|i| format!("p{i}"))
        .chain(["hbar", "converged", "residual"].map(String::from))
        .collect();
    let got: Vec<String> = rdr.headers().map_err(|e| bad(e.to_string()))?.iter().map(String::from).collect();
    if got != expected {
        return Err(bad(format!("expected columns {expected:?}, got {got:?}")));
    }
    let (mut values, mut converged, mut residuals) = (Vec::new(), Vec::new(), Vec::new());
    for (k, rec) in rdr.records().enumerate() {
        let rec = rec.map_err(|e| bad(e.to_string()))?;
        if k >= pgrid.len() {
            return Err(bad(format!("more than {} rows", pgrid.len())));
        }
        let p: Vec<f64> = (0..dim).map(|i| float(&rec[i])).collect::<Result<_>>()?;
        if p != pgrid.node(k) {
            return Err(bad(format!("row {k} has p = {p:?}, expected {:?}", pgrid.node(k))));
        }
        values.push(float(&rec[dim])?);
        converged.push(rec[dim + 1].trim().parse().map_err(|_| bad(format!("row {k}: bad converged flag")))?);
        residuals.push(float(&rec[dim + 2])?);
    }
    let mut table = EffectiveTable::new(pgrid, values, converged, residuals, provenance)
        .map_err(|e| bad(format!("row count: {e}")))?;
    table.quasiconvex_by_theorem = qc;
    Ok(TableFile { table, metadata: meta })
}

pub fn save_table(path: &Path, file: &TableFile) -> Result<()> {
    let f = std::fs::File::create(path).map_err(io_err(path))?;
    write_table(f, file)
}

pub fn load_table(path: &Path) -> Result<TableFile> {
    let f = std::fs::File::open(path).map_err(io_err(path))?;
    read_table(f)
}
