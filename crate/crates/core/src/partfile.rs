//! Partition file formats.
//!
//! Primary format: an optional `k=<k>` header, then one integer per line
//! where line `t` holds the part id of edge `t` in normalized edge-id
//! order. Alternate import format for external partitioners: lines
//! `u v p` naming a normalized edge by its endpoints; every edge must be
//! covered exactly once.

use std::fs::File;
use std::io::{BufRead, BufReader, BufWriter, Write};
use std::path::Path;

use crate::error::{Error, Result};
use crate::graph::Graph;

const MAX_OFFENDERS: usize = 10;

/// Write the primary format with a `k=<k>` header.
pub fn write_partition<W: Write>(writer: W, k: usize, assign: &[usize]) -> std::io::Result<()> {
    let mut w = BufWriter::new(writer);
    writeln!(w, "k={k}")?;
    for &p in assign {
        writeln!(w, "{p}")?;
    }
    w.flush()
}

pub fn write_partition_path<P: AsRef<Path>>(
    path: P,
    k: usize,
    assign: &[usize],
) -> std::io::Result<()> {
    write_partition(File::create(path)?, k, assign)
}

/// Read either partition format against a loaded graph. Returns the
/// assignment and the header `k` if one was present.
pub fn read_partition<R: BufRead>(reader: R, graph: &Graph) -> Result<(Vec<usize>, Option<usize>)> {
    let mut header_k: Option<usize> = None;
    let mut data: Vec<(usize, Vec<usize>)> = Vec::new(); // (line number, tokens)

    for (lineno, line) in reader.lines().enumerate() {
        let line = line?;
        let lineno = lineno + 1;
        let trimmed = line.trim();
        if trimmed.is_empty() || trimmed.starts_with('#') || trimmed.starts_with('%') {
            continue;
        }
        if let Some(rest) = trimmed.strip_prefix("k=") {
            if header_k.is_some() || !data.is_empty() {
                return Err(Error::Parse {
                    line: lineno,
                    message: "unexpected k= header".into(),
                });
            }
            let k: usize = rest.trim().parse().map_err(|_| Error::Parse {
                line: lineno,
                message: format!("invalid k value {rest:?}"),
            })?;
            if k == 0 {
                return Err(Error::Parse { line: lineno, message: "k must be at least 1".into() });
            }
            header_k = Some(k);
            continue;
        }
        let tokens: Result<Vec<usize>> = trimmed
            .split_whitespace()
            .map(|t| {
                t.parse::<usize>().map_err(|_| Error::Parse {
                    line: lineno,
                    message: format!("invalid integer {t:?}"),
                })
            })
            .collect();
        data.push((lineno, tokens?));
    }

    if data.is_empty() {
        return Err(Error::PartitionFile("no assignments found".into()));
    }

    let assign = match data[0].1.len() {
        1 => read_primary(&data, graph)?,
        3 => read_edge_keyed(&data, graph)?,
        other => {
            return Err(Error::Parse {
                line: data[0].0,
                message: format!("expected 1 or 3 tokens per line, found {other}"),
            })
        }
    };

    if let Some(k) = header_k {
        if let Some(&bad) = assign.iter().find(|&&p| p >= k) {
            return Err(Error::PartitionFile(format!(
                "header says k={k} but the data assigns part {bad}"
            )));
        }
    }
    Ok((assign, header_k))
}

fn read_primary(data: &[(usize, Vec<usize>)], graph: &Graph) -> Result<Vec<usize>> {
    let m = graph.edge_count();
    if data.len() != m {
        return Err(Error::PartitionFile(format!(
            "expected {m} assignment lines (one per edge), found {}",
            data.len()
        )));
    }
    let mut assign = Vec::with_capacity(m);
    for (lineno, tokens) in data {
        if tokens.len() != 1 {
            return Err(Error::Parse {
                line: *lineno,
                message: format!("expected 1 token, found {}", tokens.len()),
            });
        }
        assign.push(tokens[0]);
    }
    Ok(assign)
}

fn read_edge_keyed(data: &[(usize, Vec<usize>)], graph: &Graph) -> Result<Vec<usize>> {
    let m = graph.edge_count();
    let mut assign: Vec<Option<usize>> = vec![None; m];
    let mut offenders: Vec<String> = Vec::new();

    for (lineno, tokens) in data {
        if tokens.len() != 3 {
            return Err(Error::Parse {
                line: *lineno,
                message: format!("expected 3 tokens, found {}", tokens.len()),
            });
        }
        let (u, v, p) = (tokens[0], tokens[1], tokens[2]);
        match graph.edge_between(u, v) {
            Some(e) => {
                if assign[e].is_some() {
                    if offenders.len() < MAX_OFFENDERS {
                        offenders.push(format!("line {lineno}: edge {u} {v} assigned twice"));
                    }
                } else {
                    assign[e] = Some(p);
                }
            }
            None => {
                if offenders.len() < MAX_OFFENDERS {
                    offenders.push(format!("line {lineno}: no edge {u} {v} in the graph"));
                }
            }
        }
    }
    for (e, slot) in assign.iter().enumerate() {
        if slot.is_none() && offenders.len() < MAX_OFFENDERS {
            let (u, v) = graph.edge(e);
            offenders.push(format!("edge {e} ({u} {v}) has no assignment"));
        }
    }
    if !offenders.is_empty() {
        return Err(Error::PartitionFile(offenders.join("; ")));
    }
    Ok(assign.into_iter().map(Option::unwrap).collect())
}

pub fn read_partition_path<P: AsRef<Path>>(
    path: P,
    graph: &Graph,
) -> Result<(Vec<usize>, Option<usize>)> {
    read_partition(BufReader::new(File::open(path)?), graph)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn triangle() -> Graph {
        Graph::from_edges(3, &[(0, 1), (1, 2), (0, 2)]).unwrap()
    }

    #[test]
    fn primary_roundtrip() {
        let g = triangle();
        let mut buf = Vec::new();
        write_partition(&mut buf, 3, &[0, 1, 2]).unwrap();
        let (assign, k) = read_partition(&buf[..], &g).unwrap();
        assert_eq!(assign, vec![0, 1, 2]);
        assert_eq!(k, Some(3));
    }

    #[test]
    fn headerless_primary_is_accepted() {
        let g = triangle();
        let (assign, k) = read_partition("0\n0\n1\n".as_bytes(), &g).unwrap();
        assert_eq!(assign, vec![0, 0, 1]);
        assert_eq!(k, None);
    }

    #[test]
    fn header_data_mismatch_is_an_error() {
        let g = triangle();
        let err = read_partition("k=2\n0\n1\n2\n".as_bytes(), &g).unwrap_err();
        assert!(err.to_string().contains("k=2"), "{err}");
    }

    #[test]
    fn wrong_line_count_is_an_error() {
        let g = triangle();
        assert!(read_partition("0\n1\n".as_bytes(), &g).is_err());
    }

    #[test]
    fn edge_keyed_format() {
        let g = triangle();
        let text = "0 1 2\n2 1 0\n0 2 1\n";
        let (assign, _) = read_partition(text.as_bytes(), &g).unwrap();
        assert_eq!(assign, vec![2, 0, 1]);
    }

    #[test]
    fn edge_keyed_offenders_are_listed() {
        let g = triangle();
        // One unknown edge and one missing edge.
        let text = "0 1 0\n1 2 1\n1 0 2\n";
        let err = read_partition(text.as_bytes(), &g).unwrap_err();
        let msg = err.to_string();
        assert!(msg.contains("assigned twice"), "{msg}");
        assert!(msg.contains("has no assignment"), "{msg}");
    }
}
