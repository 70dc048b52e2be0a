//! Reader and writer for the TUDataset plain-text format.
//!
//! Only three files are consulted: `<NAME>_A.txt` (one `i, j` edge per line,
//! 1-based global vertex ids), `<NAME>_graph_indicator.txt` (line `v` holds
//! the 1-based graph id of vertex `v`) and `<NAME>_graph_labels.txt` (line `g`
//! holds the integer class of graph `g`). Label and attribute files are
//! ignored. The files may sit directly in the given directory or in a
//! `<NAME>/` subdirectory of it, as in the upstream archives.

use std::collections::BTreeSet;
use std::fs;
use std::io::{BufWriter, Write};
use std::path::{Path, PathBuf};

use crate::error::{Error, Result};
use crate::graph::{Dataset, Graph};

fn dataset_file(dir: &Path, name: &str, suffix: &str) -> PathBuf {
    dir.join(format!("{name}_{suffix}.txt"))
}

/// Reads a file into its lines, accepting LF or CRLF endings. Blank lines
/// are tolerated only at the end of the file.
fn read_lines(path: &Path) -> Result<Vec<String>> {
    let text = match fs::read_to_string(path) {
        Ok(t) => t,
        Err(e) if e.kind() == std::io::ErrorKind::NotFound => {
            return Err(Error::MissingFile(path.to_path_buf()))
        }
        Err(e) => return Err(Error::io(path, e)),
    };
    let mut lines: Vec<String> = text.lines().map(|l| l.trim().to_string()).collect();
    while lines.last().is_some_and(|l| l.is_empty()) {
        lines.pop();
    }
    if let Some(i) = lines.iter().position(|l| l.is_empty()) {
        return Err(Error::format(path, i + 1, "unexpected blank line"));
    }
    Ok(lines)
}

fn parse_int<T: std::str::FromStr>(path: &Path, line: usize, field: &str) -> Result<T> {
    field
        .trim()
        .parse()
        .map_err(|_| Error::format(path, line, format!("cannot parse {field:?} as an integer")))
}

/// Loads `<name>` from `directory`.
///
/// Vertex ids are remapped to per-graph 0-based indices in file order, both
/// directions of an edge collapse to one undirected edge, self-loops are
/// dropped, and label values are mapped to dense classes in ascending order.
pub fn load_tudataset(directory: impl AsRef<Path>, name: &str) -> Result<Dataset> {
    let mut dir = directory.as_ref().to_path_buf();
    if !dataset_file(&dir, name, "graph_indicator").exists() && dataset_file(&dir.join(name), name, "graph_indicator").exists() {
        dir = dir.join(name);
    }
    let dir = dir.as_path();
    let a_path = dataset_file(dir, name, "A");
    let ind_path = dataset_file(dir, name, "graph_indicator");
    let lab_path = dataset_file(dir, name, "graph_labels");

    let indicator_lines = read_lines(&ind_path)?;
    let label_lines = read_lines(&lab_path)?;
    let edge_lines = read_lines(&a_path)?;

    let raw_labels: Vec<i64> = label_lines
        .iter()
        .enumerate()
        .map(|(i, l)| parse_int(&lab_path, i + 1, l))
        .collect::<Result<_>>()?;
    let graph_count = raw_labels.len();

    // Global vertex v (0-based) -> (graph, local index).
    let mut owner = Vec::with_capacity(indicator_lines.len());
    let mut sizes = vec![0usize; graph_count];
    let mut max_graph_id = 0usize;
    for (i, l) in indicator_lines.iter().enumerate() {
        let gid: usize = parse_int(&ind_path, i + 1, l)?;
        if gid == 0 || gid > graph_count {
            return Err(Error::format(
                &ind_path,
                i + 1,
                format!("graph id {gid} outside 1..={graph_count} (from {})", lab_path.display()),
            ));
        }
        max_graph_id = max_graph_id.max(gid);
        owner.push((gid - 1, sizes[gid - 1]));
        sizes[gid - 1] += 1;
    }
    if max_graph_id != graph_count {
        return Err(Error::format(
            &lab_path,
            graph_count,
            format!("{graph_count} graph labels but the indicator file names {max_graph_id} graphs"),
        ));
    }

    let mut edges: Vec<Vec<(usize, usize)>> = vec![Vec::new(); graph_count];
    for (i, l) in edge_lines.iter().enumerate() {
        let line = i + 1;
        let (a, b) = l
            .split_once(',')
            .ok_or_else(|| Error::format(&a_path, line, "expected `i, j`"))?;
        let a: usize = parse_int(&a_path, line, a)?;
        let b: usize = parse_int(&a_path, line, b)?;
        let lookup = |v: usize| {
            v.checked_sub(1)
                .and_then(|v| owner.get(v))
                .copied()
                .ok_or_else(|| Error::format(&a_path, line, format!("vertex {v} is not in the indicator file")))
        };
        let (ga, la) = lookup(a)?;
        let (gb, lb) = lookup(b)?;
        if ga != gb {
            return Err(Error::format(
                &a_path,
                line,
                format!("edge ({a}, {b}) joins graph {} and graph {}", ga + 1, gb + 1),
            ));
        }
        edges[ga].push((la, lb));
    }

    let graphs = sizes
        .iter()
        .zip(edges)
        .map(|(&n, e)| Graph::new(n, e))
        .collect::<Result<Vec<_>>>()?;

    let class_values: Vec<i64> = raw_labels.iter().copied().collect::<BTreeSet<_>>().into_iter().collect();
    let labels = raw_labels
        .iter()
        .map(|v| class_values.binary_search(v).expect("value collected above"))
        .collect();
    Dataset::with_class_values(name, graphs, labels, class_values)
}

/// Writes `ds` as `<name>_A.txt`, `<name>_graph_indicator.txt` and
/// `<name>_graph_labels.txt` in `directory`, listing each edge in both
/// directions as TUDataset does. Original label values are written back.
pub fn write_tudataset(ds: &Dataset, directory: impl AsRef<Path>, name: &str) -> Result<()> {
    let dir = directory.as_ref();
    fs::create_dir_all(dir).map_err(|e| Error::io(dir, e))?;

    let write_file = |suffix: &str, body: &dyn Fn(&mut dyn Write) -> std::io::Result<()>| -> Result<()> {
        let path = dataset_file(dir, name, suffix);
        let file = fs::File::create(&path).map_err(|e| Error::io(&path, e))?;
        let mut out = BufWriter::new(file);
        body(&mut out)
            .and_then(|_| out.flush())
            .map_err(|e| Error::io(&path, e))
    };

    write_file("A", &|out| {
        let mut base = 0usize;
        for g in ds.graphs() {
            for &(u, v) in g.edges() {
                let (u, v) = (base + u as usize + 1, base + v as usize + 1);
                writeln!(out, "{u}, {v}")?;
                writeln!(out, "{v}, {u}")?;
            }
            base += g.vertex_count();
        }
        Ok(())
    })?;
    write_file("graph_indicator", &|out| {
        for (i, g) in ds.graphs().iter().enumerate() {
            for _ in 0..g.vertex_count() {
                writeln!(out, "{}", i + 1)?;
            }
        }
        Ok(())
    })?;
    write_file("graph_labels", &|out| {
        for &l in ds.labels() {
            writeln!(out, "{}", ds.class_values()[l])?;
        }
        Ok(())
    })
}
