use std::fs;

use num_bigint::BigInt;

use partfn_core::error::{Error, Result};
use partfn_core::exact::parse_rat;
use partfn_core::graph::{from_graph6, from_json, parse_named, GraphJson};
use partfn_core::{BigRat, CoefVector, Graph, Kind};

/// A graph given by name (`K33`, `C4+C4`, ...), as graph6, as inline JSON
/// or as a path to a JSON file. `g6:` forces graph6.
pub fn graph(s: &str) -> Result<Graph> {
    let s = s.trim();
    if let Some(g6) = s.strip_prefix("g6:") {
        return from_graph6(g6);
    }
    if s.starts_with('{') {
        return graph_json(s);
    }
    if s.ends_with(".json") {
        let text = fs::read_to_string(s).map_err(|e| Error::Parse(format!("{s}: {e}")))?;
        return graph_json(&text);
    }
    parse_named(s).or_else(|named| from_graph6(s).map_err(|_| named))
}

fn graph_json(text: &str) -> Result<Graph> {
    let j: GraphJson = serde_json::from_str(text).map_err(|e| Error::Parse(e.to_string()))?;
    from_json(&j)
}

pub fn kind(s: &str) -> Result<Kind> {
    s.parse()
}

pub fn rat(s: &str) -> Result<BigRat> {
    parse_rat(s)
}

pub fn rats(s: &str) -> Result<Vec<BigRat>> {
    s.split(',').map(parse_rat).collect()
}

/// Comma-separated integers, or `@path` to a JSON coefficient vector.
pub fn coeff_list(s: &str) -> Result<Vec<BigInt>> {
    if let Some(path) = s.strip_prefix('@') {
        let text = fs::read_to_string(path).map_err(|e| Error::Parse(format!("{path}: {e}")))?;
        let c: CoefVector = serde_json::from_str(&text).map_err(|e| Error::Parse(e.to_string()))?;
        return Ok(c.coeffs.into_iter().map(Into::into).collect());
    }
    s.split(',')
        .map(|t| t.trim().parse().map_err(|_| Error::Parse(format!("bad coefficient {t:?}"))))
        .collect()
}

pub fn k_range(s: &str) -> Result<(usize, usize)> {
    let (a, b) = s.split_once("..").ok_or_else(|| Error::Parse(format!("expected a..b, got {s:?}")))?;
    let p = |t: &str| t.trim().parse::<usize>().map_err(|_| Error::Parse(format!("bad bound {t:?}")));
    let (a, b) = (p(a)?, p(b)?);
    if a > b {
        return Err(Error::InvalidInput(format!("empty range {s}")));
    }
    Ok((a, b))
}
