//! CSV formats for embeddings, spectra, objective traces and partitions.
//!
//! Numbers are written in Rust's shortest round-trip form, switching to
//! exponent notation outside `[1e-4, 1e15)`, so files are exact and
//! byte-stable for identical inputs.

use std::collections::HashMap;
use std::io::{BufRead, Write};

use ndarray::{Array2, ArrayView2};

use crate::error::{Error, Result};
use crate::graph::Graph;
use crate::solver::TraceEntry;

pub fn format_float(v: f64) -> String {
    let a = v.abs();
    if v == 0.0 {
        "0".to_owned()
    } else if (1e-4..1e15).contains(&a) {
        format!("{v}")
    } else {
        format!("{v:e}")
    }
}

/// `node,coord_1,...,coord_r`, one row per node.
pub fn write_embedding_csv<W: Write>(mut out: W, labels: &[String], coords: ArrayView2<f64>) -> Result<()> {
    if labels.len() != coords.nrows() {
        return Err(Error::LengthMismatch {
            left: labels.len(),
            right: coords.nrows(),
        });
    }
    write!(out, "node")?;
    for c in 1..=coords.ncols() {
        write!(out, ",coord_{c}")?;
    }
    writeln!(out)?;
    for (label, row) in labels.iter().zip(coords.rows()) {
        write!(out, "{label}")?;
        for &v in row {
            write!(out, ",{}", format_float(v))?;
        }
        writeln!(out)?;
    }
    Ok(())
}

/// Reads an embedding CSV back as `(labels, coordinates)`.
pub fn read_embedding_csv<R: BufRead>(reader: R) -> Result<(Vec<String>, Array2<f64>)> {
    let mut lines = reader.lines();
    let header = lines
        .next()
        .ok_or_else(|| Error::parse(1, "missing header"))??;
    let columns: Vec<&str> = header.trim_end().split(',').collect();
    if columns.first() != Some(&"node") || columns.len() < 2 {
        return Err(Error::parse(1, "expected header `node,coord_1,...`"));
    }
    let r = columns.len() - 1;
    let mut labels = Vec::new();
    let mut values = Vec::new();
    for (k, line) in lines.enumerate() {
        let line = line?;
        let line = line.trim_end();
        if line.is_empty() {
            continue;
        }
        let fields: Vec<&str> = line.split(',').collect();
        if fields.len() != r + 1 {
            return Err(Error::parse(
                k + 2,
                format!("expected {} fields, found {}", r + 1, fields.len()),
            ));
        }
        labels.push(fields[0].to_owned());
        for f in &fields[1..] {
            let v: f64 = f
                .parse()
                .map_err(|_| Error::parse(k + 2, format!("bad number `{f}`")))?;
            values.push(v);
        }
    }
    let coords = Array2::from_shape_vec((labels.len(), r), values)
        .map_err(|e| Error::parse(0, e.to_string()))?;
    Ok((labels, coords))
}

/// Reorders rows read from a file so that row `i` belongs to node `i` of
/// `graph`; every node must appear exactly once.
pub fn align_rows(graph: &Graph, labels: &[String], coords: ArrayView2<f64>) -> Result<Array2<f64>> {
    let n = graph.node_count();
    if labels.len() != n {
        return Err(Error::DimensionMismatch {
            expected: n,
            found: labels.len(),
        });
    }
    let mut out = Array2::zeros((n, coords.ncols()));
    let mut seen = vec![false; n];
    for (label, row) in labels.iter().zip(coords.rows()) {
        let i = graph
            .index_of(label)
            .ok_or_else(|| Error::UnknownNode(label.clone()))?;
        if seen[i] {
            return Err(Error::ConflictingLabel(label.clone()));
        }
        seen[i] = true;
        out.row_mut(i).assign(&row);
    }
    Ok(out)
}

/// `index,eigenvalue_of_rho_over_n`, 1-based.
pub fn write_spectrum_csv<W: Write>(mut out: W, spectrum: &[f64]) -> Result<()> {
    writeln!(out, "index,eigenvalue_of_rho_over_n")?;
    for (i, &v) in spectrum.iter().enumerate() {
        writeln!(out, "{},{}", i + 1, format_float(v))?;
    }
    Ok(())
}

/// `iteration,objective,delta_criterion`.
pub fn write_trace_csv<W: Write>(mut out: W, trace: &[TraceEntry]) -> Result<()> {
    writeln!(out, "iteration,objective,delta_criterion")?;
    for t in trace {
        writeln!(
            out,
            "{},{},{}",
            t.iteration,
            format_float(t.objective),
            format_float(t.delta)
        )?;
    }
    Ok(())
}

/// `node_label,cluster_id`.
pub fn write_partition_csv<W: Write>(mut out: W, labels: &[String], clusters: &[usize]) -> Result<()> {
    if labels.len() != clusters.len() {
        return Err(Error::LengthMismatch {
            left: labels.len(),
            right: clusters.len(),
        });
    }
    writeln!(out, "node_label,cluster_id")?;
    for (l, c) in labels.iter().zip(clusters) {
        writeln!(out, "{l},{c}")?;
    }
    Ok(())
}

/// Reads a partition CSV into a label -> cluster map.
pub fn read_partition_csv<R: BufRead>(reader: R) -> Result<HashMap<String, usize>> {
    let mut map = HashMap::new();
    for (k, line) in reader.lines().enumerate() {
        let line = line?;
        let line = line.trim_end();
        if k == 0 {
            if line != "node_label,cluster_id" {
                return Err(Error::parse(1, "expected header `node_label,cluster_id`"));
            }
            continue;
        }
        if line.is_empty() {
            continue;
        }
        let (label, cluster) = line
            .split_once(',')
            .ok_or_else(|| Error::parse(k + 1, "expected `node_label,cluster_id`"))?;
        let cluster = cluster
            .parse()
            .map_err(|_| Error::parse(k + 1, format!("bad cluster id `{cluster}`")))?;
        map.insert(label.to_owned(), cluster);
    }
    Ok(map)
}

#[cfg(test)]
mod tests {
    use super::*;
    use ndarray::array;
    use proptest::prelude::*;

    #[test]
    fn embedding_header() {
        let mut buf = Vec::new();
        let labels = vec!["a".to_owned(), "b".to_owned()];
        write_embedding_csv(&mut buf, &labels, array![[0.5, -0.25], [1e-9, 3.0]].view()).unwrap();
        assert_eq!(
            String::from_utf8(buf).unwrap(),
            "node,coord_1,coord_2\na,0.5,-0.25\nb,1e-9,3\n"
        );
    }

    #[test]
    fn partition_round_trip() {
        let mut buf = Vec::new();
        let labels = vec!["7".to_owned(), "x".to_owned()];
        write_partition_csv(&mut buf, &labels, &[1, 0]).unwrap();
        let map = read_partition_csv(buf.as_slice()).unwrap();
        assert_eq!(map["7"], 1);
        assert_eq!(map["x"], 0);
    }

    #[test]
    fn align_detects_mismatch() {
        let g = Graph::from_index_edges(2, &[(0, 1)]).unwrap();
        let coords = array![[1.0], [2.0]];
        let ok = align_rows(&g, &["1".into(), "0".into()], coords.view()).unwrap();
        assert_eq!(ok, array![[2.0], [1.0]]);
        assert!(align_rows(&g, &["1".into(), "5".into()], coords.view()).is_err());
        assert!(align_rows(&g, &["1".into()], coords.slice(ndarray::s![..1, ..])).is_err());
    }

    proptest! {
        #[test]
        fn embedding_csv_round_trips(values in prop::collection::vec(-1e20f64..1e20, 1..40)) {
            let r = 1 + values.len() % 3;
            let n = values.len() / r;
            prop_assume!(n > 0);
            let coords = Array2::from_shape_vec((n, r), values[..n * r].to_vec()).unwrap();
            let labels: Vec<String> = (0..n).map(|i| format!("v{i}")).collect();
            let mut buf = Vec::new();
            write_embedding_csv(&mut buf, &labels, coords.view()).unwrap();
            let (l2, c2) = read_embedding_csv(buf.as_slice()).unwrap();
            prop_assert_eq!(l2, labels);
            prop_assert_eq!(c2, coords);
        }
    }
}
