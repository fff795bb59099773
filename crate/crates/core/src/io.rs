//! Instance file formats.
//!
//! Points: CSV with header `x0,...,x{d-1}[,label]`, label a non-negative
//! integer. Graphs: one `u v [w]` edge per line, 0-indexed, `#` comments,
//! missing weight means 1.0.

use std::io::{BufRead, Write};

use crate::error::{Error, Result};
use crate::instance::ClusteringInstance;
use crate::maxcut::Graph;

#[derive(Debug, Clone)]
pub struct PointsFile {
    pub instance: ClusteringInstance,
    pub labels: Option<Vec<usize>>,
}

pub fn read_points<R: std::io::Read>(reader: R) -> Result<PointsFile> {
    let mut rdr = csv::ReaderBuilder::new().trim(csv::Trim::All).from_reader(reader);
    let headers = rdr.headers()?.clone();
    let mut dim = 0;
    for (i, h) in headers.iter().enumerate() {
        if h == format!("x{i}") {
            dim += 1;
        } else {
            break;
        }
    }
    let has_label = match headers.len() - dim {
        0 => false,
        1 if headers.get(dim) == Some("label") => true,
        _ => return Err(Error::Parse(format!("unexpected points header: {:?}", headers.iter().collect::<Vec<_>>()))),
    };
    if dim == 0 {
        return Err(Error::Parse("points header must start with x0".into()));
    }
    let mut points = Vec::new();
    let mut labels = Vec::new();
    for (line, rec) in rdr.records().enumerate() {
        let rec = rec?;
        let mut p = Vec::with_capacity(dim);
        for c in 0..dim {
            let field = rec.get(c).unwrap_or("");
            p.push(field.parse::<f64>().map_err(|e| Error::Parse(format!("row {}: {field:?}: {e}", line + 2)))?);
        }
        if has_label {
            let field = rec.get(dim).unwrap_or("");
            labels.push(field.parse::<usize>().map_err(|e| Error::Parse(format!("row {}: label {field:?}: {e}", line + 2)))?);
        }
        points.push(p);
    }
    Ok(PointsFile { instance: ClusteringInstance::new(points)?, labels: has_label.then_some(labels) })
}

pub fn write_points<W: Write>(writer: W, instance: &ClusteringInstance, labels: Option<&[usize]>) -> Result<()> {
    let mut wtr = csv::Writer::from_writer(writer);
    let mut header: Vec<String> = (0..instance.dim()).map(|i| format!("x{i}")).collect();
    if labels.is_some() {
        header.push("label".into());
    }
    wtr.write_record(&header)?;
    for i in 0..instance.n() {
        let mut row: Vec<String> = instance.point(i).iter().map(|c| format!("{c:?}")).collect();
        if let Some(l) = labels {
            row.push(l[i].to_string());
        }
        wtr.write_record(&row)?;
    }
    wtr.flush()?;
    Ok(())
}

/// Reads an edge list. The vertex count is `max index + 1` unless a larger
/// `n` is given.
pub fn read_graph<R: BufRead>(reader: R, n: Option<usize>) -> Result<Graph> {
    let mut edges = Vec::new();
    let mut max_v = None::<usize>;
    for (lineno, line) in reader.lines().enumerate() {
        let line = line?;
        let t = line.trim();
        if t.is_empty() || t.starts_with('#') {
            continue;
        }
        let parts: Vec<&str> = t.split_whitespace().collect();
        if parts.len() < 2 || parts.len() > 3 {
            return Err(Error::Parse(format!("line {}: expected `u v [w]`", lineno + 1)));
        }
        let parse_v = |s: &str| s.parse::<usize>().map_err(|e| Error::Parse(format!("line {}: {s:?}: {e}", lineno + 1)));
        let u = parse_v(parts[0])?;
        let v = parse_v(parts[1])?;
        let w = match parts.get(2) {
            Some(s) => s.parse::<f64>().map_err(|e| Error::Parse(format!("line {}: {s:?}: {e}", lineno + 1)))?,
            None => 1.0,
        };
        max_v = Some(max_v.map_or(u.max(v), |m| m.max(u).max(v)));
        edges.push((u, v, w));
    }
    let inferred = max_v.map_or(0, |m| m + 1);
    Graph::new(n.unwrap_or(0).max(inferred), edges)
}

pub fn write_graph<W: Write>(mut writer: W, graph: &Graph) -> Result<()> {
    writeln!(writer, "# n={} m={}", graph.n(), graph.edge_count())?;
    let unweighted = graph.is_unweighted();
    for &(u, v, w) in graph.edges() {
        if unweighted {
            writeln!(writer, "{u} {v}")?;
        } else {
            writeln!(writer, "{u} {v} {w:?}")?;
        }
    }
    Ok(())
}
