//! graph6 and digraph6 encodings (one graph per line).
//!
//! graph6 stores the upper triangle column by column (`x(0,1), x(0,2),
//! x(1,2), x(0,3), …`); digraph6 starts with `&` and stores the full
//! adjacency matrix row by row. Bits are packed six per byte, offset by 63.

use crate::error::ParseError;

use super::{Digraph, Graph};

fn err(msg: impl Into<String>) -> ParseError {
    ParseError::Graph6(msg.into())
}

fn encode_size(n: usize, out: &mut Vec<u8>) {
    if n <= 62 {
        out.push(n as u8 + 63);
    } else if n <= 258_047 {
        out.push(126);
        for shift in [12, 6, 0] {
            out.push(((n >> shift) & 63) as u8 + 63);
        }
    } else {
        out.push(126);
        out.push(126);
        for shift in [30, 24, 18, 12, 6, 0] {
            out.push(((n >> shift) & 63) as u8 + 63);
        }
    }
}

/// Returns `(n, bytes consumed)`.
fn decode_size(bytes: &[u8]) -> Result<(usize, usize), ParseError> {
    let val = |k: usize| -> Result<usize, ParseError> {
        let b = *bytes.get(k).ok_or_else(|| err("truncated size header"))?;
        if !(63..=126).contains(&b) {
            return Err(err(format!("byte {b} at offset {k} out of range")));
        }
        Ok((b - 63) as usize)
    };
    match bytes.first() {
        None => Err(err("empty input")),
        Some(126) if bytes.get(1) == Some(&126) => {
            let mut n = 0;
            for k in 2..8 {
                n = (n << 6) | val(k)?;
            }
            Ok((n, 8))
        }
        Some(126) => {
            let mut n = 0;
            for k in 1..4 {
                n = (n << 6) | val(k)?;
            }
            Ok((n, 4))
        }
        Some(_) => Ok((val(0)?, 1)),
    }
}

fn pack_bits(bits: impl Iterator<Item = bool>, out: &mut Vec<u8>) {
    let mut acc = 0u8;
    let mut filled = 0;
    for b in bits {
        acc = (acc << 1) | b as u8;
        filled += 1;
        if filled == 6 {
            out.push(acc + 63);
            acc = 0;
            filled = 0;
        }
    }
    if filled > 0 {
        out.push((acc << (6 - filled)) + 63);
    }
}

fn unpack_bits(payload: &[u8], count: usize) -> Result<Vec<bool>, ParseError> {
    let expected = count.div_ceil(6);
    if payload.len() < expected {
        return Err(err(format!("truncated: expected {expected} data bytes, found {}", payload.len())));
    }
    if payload.len() > expected {
        return Err(err(format!("{} trailing bytes", payload.len() - expected)));
    }
    let mut bits = Vec::with_capacity(expected * 6);
    for (k, &b) in payload.iter().enumerate() {
        if !(63..=126).contains(&b) {
            return Err(err(format!("byte {b} at data offset {k} out of range")));
        }
        let v = b - 63;
        for shift in (0..6).rev() {
            bits.push((v >> shift) & 1 == 1);
        }
    }
    if bits[count..].iter().any(|&b| b) {
        return Err(err("nonzero padding bits"));
    }
    bits.truncate(count);
    Ok(bits)
}

fn strip_line(text: &str) -> &[u8] {
    let t = text.trim_end_matches(['\n', '\r']);
    t.as_bytes()
}

pub fn parse_graph6(text: &str) -> Result<Graph, ParseError> {
    let mut bytes = strip_line(text);
    if let Some(rest) = bytes.strip_prefix(b">>graph6<<") {
        bytes = rest;
    }
    if bytes.first() == Some(&b'&') {
        return Err(err("digraph6 input where graph6 was expected"));
    }
    let (n, used) = decode_size(bytes)?;
    let bits = unpack_bits(&bytes[used..], n * n.saturating_sub(1) / 2)?;
    let mut g = Graph::empty(n);
    let mut k = 0;
    for j in 1..n {
        for i in 0..j {
            if bits[k] {
                g.add_edge(i, j);
            }
            k += 1;
        }
    }
    Ok(g)
}

pub fn to_graph6(g: &Graph) -> String {
    let n = g.order();
    let mut out = Vec::new();
    encode_size(n, &mut out);
    pack_bits((1..n).flat_map(|j| (0..j).map(move |i| (i, j))).map(|(i, j)| g.has_edge(i, j)), &mut out);
    String::from_utf8(out).expect("graph6 is ASCII")
}

pub fn parse_digraph6(text: &str) -> Result<Digraph, ParseError> {
    let mut bytes = strip_line(text);
    if let Some(rest) = bytes.strip_prefix(b">>digraph6<<") {
        bytes = rest;
    }
    let Some(rest) = bytes.strip_prefix(b"&") else {
        return Err(err("digraph6 must start with `&`"));
    };
    let (n, used) = decode_size(rest)?;
    let bits = unpack_bits(&rest[used..], n * n)?;
    let mut d = Digraph::empty(n);
    for u in 0..n {
        for v in 0..n {
            if bits[u * n + v] {
                if u == v {
                    return Err(err(format!("loop at vertex {u}")));
                }
                d.add_arc(u, v);
            }
        }
    }
    Ok(d)
}

pub fn to_digraph6(d: &Digraph) -> String {
    let n = d.order();
    let mut out = vec![b'&'];
    encode_size(n, &mut out);
    pack_bits((0..n).flat_map(|u| (0..n).map(move |v| (u, v))).map(|(u, v)| d.has_arc(u, v)), &mut out);
    String::from_utf8(out).expect("digraph6 is ASCII")
}

#[cfg(test)]
mod tests {
    use super::*;

    /// Bit-by-bit decoder written directly from the format description,
    /// kept separate from the packing helpers above.
    fn oracle_edges(s: &str) -> (usize, Vec<(usize, usize)>) {
        let b = s.as_bytes();
        let n = (b[0] - 63) as usize;
        let mut bits = Vec::new();
        for &c in &b[1..] {
            let v = c - 63;
            for k in 0..6 {
                bits.push(v & (32 >> k) != 0);
            }
        }
        let mut edges = Vec::new();
        let mut k = 0;
        for j in 0..n {
            for i in 0..j {
                if bits[k] {
                    edges.push((i, j));
                }
                k += 1;
            }
        }
        (n, edges)
    }

    #[test]
    fn k2_from_a_underscore() {
        let g = parse_graph6("A_").unwrap();
        assert_eq!(g.order(), 2);
        assert!(g.has_edge(0, 1));
        assert_eq!(oracle_edges("A_"), (2, vec![(0, 1)]));
    }

    #[test]
    fn empty_graph_on_five() {
        let g = parse_graph6("D??").unwrap();
        assert_eq!(g.order(), 5);
        assert_eq!(g.edge_count(), 0);
        assert_eq!(oracle_edges("D??"), (5, vec![]));
    }

    #[test]
    fn matches_oracle_on_known_string() {
        // petgraph's documented example: edges 0-2, 0-4, 1-3, 3-4
        let g = parse_graph6("DQc").unwrap();
        let (n, edges) = oracle_edges("DQc");
        assert_eq!(n, 5);
        assert_eq!(edges, vec![(0, 2), (1, 3), (0, 4), (3, 4)]);
        for (i, j) in edges {
            assert!(g.has_edge(i, j));
        }
        assert_eq!(g.edge_count(), 4);
        assert_eq!(to_graph6(&g), "DQc");
    }

    #[test]
    fn malformed_inputs() {
        assert!(parse_graph6("").is_err());
        assert!(parse_graph6("D?").is_err()); // truncated
        assert!(parse_graph6("A_?").is_err()); // trailing garbage
        assert!(parse_graph6("A\x7f").is_err()); // out of range byte
        assert!(parse_graph6("A`").is_err()); // padding bit set
        assert!(parse_graph6("~").is_err()); // truncated long header
    }

    #[test]
    fn long_size_header() {
        let g = Graph::empty(100);
        let s = to_graph6(&g);
        assert!(s.starts_with('~'));
        assert_eq!(parse_graph6(&s).unwrap().order(), 100);
    }

    #[test]
    fn digraph6_round_trip() {
        let mut d = Digraph::empty(3);
        d.add_arc(0, 1);
        d.add_arc(1, 0);
        d.add_arc(2, 1);
        let s = to_digraph6(&d);
        assert!(s.starts_with('&'));
        assert_eq!(parse_digraph6(&s).unwrap(), d);
        assert!(parse_digraph6("B?").is_err());
        assert!(parse_graph6(&s).is_err());
    }

    #[test]
    fn header_and_newline_accepted() {
        let g = parse_graph6(">>graph6<<A_\n").unwrap();
        assert!(g.has_edge(0, 1));
    }
}
