//! Text formats for surfaces and curves.
//!
//! Surface files:
//!
//! ```text
//! surface <n_V> <n_E>
//! rot <v> <h_1> <h_2> ...
//! w <e> <p>/<q>
//! perforate <face_id>
//! ```
//!
//! Curve lines: `walk closed|open <h_1> ...`, optionally followed by
//! `ends <face_id> <face_id>` for arcs. Blank lines and lines starting
//! with `#` are ignored.

use std::fmt::Write as _;

use num_bigint::BigInt;

use crate::curves::{Arc, ArcEnd, Curve, Walk};
use crate::error::{Error, Result};
use crate::surface::{HalfEdge, Surface};
use crate::{format_rational, Rational};

fn perr(line: usize, msg: impl Into<String>) -> Error {
    Error::Parse { line, msg: msg.into() }
}

fn num<T: std::str::FromStr>(tok: Option<&str>, line: usize, what: &str) -> Result<T> {
    let t = tok.ok_or_else(|| perr(line, format!("missing {what}")))?;
    t.parse().map_err(|_| perr(line, format!("invalid {what} `{t}`")))
}

/// Parses `p/q` or `p` into a rational.
pub fn parse_rational(t: &str) -> Option<Rational> {
    let (p, q) = match t.split_once('/') {
        Some((p, q)) => (p.parse::<BigInt>().ok()?, q.parse::<BigInt>().ok()?),
        None => (t.parse::<BigInt>().ok()?, BigInt::from(1)),
    };
    if q == BigInt::from(0) {
        return None;
    }
    Some(Rational::new(p, q))
}

fn content_lines(text: &str) -> impl Iterator<Item = (usize, &str)> {
    text.lines()
        .enumerate()
        .map(|(i, l)| (i + 1, l.trim()))
        .filter(|(_, l)| !l.is_empty() && !l.starts_with('#'))
}

/// Parses a surface file. Errors carry the offending line number.
pub fn parse_surface(text: &str) -> Result<Surface> {
    let mut lines = content_lines(text);
    let (l0, header) = lines.next().ok_or_else(|| perr(1, "empty input"))?;
    let mut tok = header.split_whitespace();
    if tok.next() != Some("surface") {
        return Err(perr(l0, "expected `surface <n_V> <n_E>`"));
    }
    let n_v: usize = num(tok.next(), l0, "vertex count")?;
    let n_e: usize = num(tok.next(), l0, "edge count")?;
    if tok.next().is_some() {
        return Err(perr(l0, "trailing tokens"));
    }
    let mut rot: Vec<Option<Vec<HalfEdge>>> = vec![None; n_v];
    let mut weights: Vec<Option<Rational>> = vec![None; n_e];
    let mut perfs: Vec<(usize, usize)> = Vec::new();
    let mut seen_half = vec![None; 2 * n_e];
    let mut last_line = l0;
    for (ln, line) in lines {
        last_line = ln;
        let mut tok = line.split_whitespace();
        match tok.next() {
            Some("rot") => {
                let v: usize = num(tok.next(), ln, "vertex")?;
                if v >= n_v {
                    return Err(perr(ln, format!("vertex {v} out of range")));
                }
                if rot[v].is_some() {
                    return Err(perr(ln, format!("rotation of vertex {v} given twice")));
                }
                let mut r = Vec::new();
                for t in tok {
                    let h: usize = t.parse().map_err(|_| perr(ln, format!("invalid half-edge `{t}`")))?;
                    if h >= 2 * n_e {
                        return Err(perr(ln, format!("half-edge {h} out of range")));
                    }
                    if let Some(prev) = seen_half[h] {
                        return Err(perr(ln, format!("half-edge {h} already listed on line {prev}")));
                    }
                    seen_half[h] = Some(ln);
                    r.push(HalfEdge(h));
                }
                if r.is_empty() {
                    return Err(perr(ln, format!("vertex {v} has an empty rotation")));
                }
                rot[v] = Some(r);
            }
            Some("w") => {
                let e: usize = num(tok.next(), ln, "edge")?;
                if e >= n_e {
                    return Err(perr(ln, format!("edge {e} out of range")));
                }
                let t = tok.next().ok_or_else(|| perr(ln, "missing weight"))?;
                let r = parse_rational(t).ok_or_else(|| perr(ln, format!("invalid weight `{t}`")))?;
                if r <= Rational::from_integer(0.into()) {
                    return Err(perr(ln, format!("weight of edge {e} must be positive")));
                }
                if weights[e].replace(r).is_some() {
                    return Err(perr(ln, format!("weight of edge {e} given twice")));
                }
                if tok.next().is_some() {
                    return Err(perr(ln, "trailing tokens"));
                }
            }
            Some("perforate") => {
                let f: usize = num(tok.next(), ln, "face")?;
                perfs.push((ln, f));
            }
            Some(other) => return Err(perr(ln, format!("unknown directive `{other}`"))),
            None => {}
        }
    }
    if let Some(h) = seen_half.iter().position(|s| s.is_none()) {
        return Err(perr(last_line, format!("half-edge {h} does not appear in any rotation")));
    }
    let rot: Vec<Vec<HalfEdge>> = rot
        .into_iter()
        .enumerate()
        .map(|(v, r)| r.ok_or_else(|| perr(last_line, format!("missing rotation for vertex {v}"))))
        .collect::<Result<_>>()?;
    let weights: Vec<Rational> = weights
        .into_iter()
        .enumerate()
        .map(|(e, w)| w.ok_or_else(|| perr(last_line, format!("missing weight for edge {e}"))))
        .collect::<Result<_>>()?;
    let s = Surface::build(rot, weights, &[]).map_err(|e| perr(last_line, e.to_string()))?;
    for &(ln, f) in &perfs {
        if f >= s.n_faces() {
            return Err(perr(ln, format!("face {f} does not exist (surface has {} faces)", s.n_faces())));
        }
    }
    let faces: Vec<usize> = perfs.iter().map(|&(_, f)| f).collect();
    s.with_perforations(&faces)
}

/// Serializes a surface in the text format.
pub fn write_surface(s: &Surface) -> String {
    let mut out = String::new();
    writeln!(out, "surface {} {}", s.n_vertices(), s.n_edges()).unwrap();
    for v in 0..s.n_vertices() {
        write!(out, "rot {v}").unwrap();
        for h in s.rotation(v) {
            write!(out, " {}", h.0).unwrap();
        }
        out.push('\n');
    }
    for e in 0..s.n_edges() {
        writeln!(out, "w {e} {}", format_rational(s.weight(e))).unwrap();
    }
    for f in s.perforated_faces() {
        writeln!(out, "perforate {f}").unwrap();
    }
    out
}

/// Parses one curve line.
pub fn parse_curve_line(s: &Surface, line: &str, ln: usize) -> Result<Curve> {
    let mut tok = line.split_whitespace();
    if tok.next() != Some("walk") {
        return Err(perr(ln, "expected `walk closed|open ...`"));
    }
    let closed = match tok.next() {
        Some("closed") => true,
        Some("open") => false,
        _ => return Err(perr(ln, "expected `closed` or `open`")),
    };
    let mut hs = Vec::new();
    let mut ends = None;
    while let Some(t) = tok.next() {
        if t == "ends" {
            let a: usize = num(tok.next(), ln, "face")?;
            let b: usize = num(tok.next(), ln, "face")?;
            ends = Some((a, b));
            if tok.next().is_some() {
                return Err(perr(ln, "trailing tokens"));
            }
            break;
        }
        let h: usize = t.parse().map_err(|_| perr(ln, format!("invalid half-edge `{t}`")))?;
        hs.push(HalfEdge(h));
    }
    let wrap = |e: Error| perr(ln, e.to_string());
    let curve = match (closed, ends) {
        (true, None) => Curve::Closed(Walk::closed(hs)),
        (true, Some(_)) => return Err(perr(ln, "closed walks take no `ends`")),
        (false, None) => return Err(perr(ln, "open walks need `ends <face> <face>`")),
        (false, Some((fa, fb))) => {
            let w = Walk::open(hs);
            w.validate(s).map_err(wrap)?;
            let x = w.start(s);
            let y = s.head(*w.half_edges.last().unwrap());
            let start = ArcEnd::at(s, x, fa).map_err(wrap)?;
            let end = ArcEnd::at(s, y, fb).map_err(wrap)?;
            Curve::Arc(Arc { walk: w, start, end })
        }
    };
    curve.validate(s).map_err(wrap)?;
    Ok(curve)
}

/// Parses a file of curve lines.
pub fn parse_curves(s: &Surface, text: &str) -> Result<Vec<Curve>> {
    content_lines(text).map(|(ln, l)| parse_curve_line(s, l, ln)).collect()
}

/// Serializes a curve as a single line.
pub fn write_curve(c: &Curve) -> String {
    let mut out = String::from(if c.is_closed() { "walk closed" } else { "walk open" });
    for h in c.half_edges() {
        write!(out, " {}", h.0).unwrap();
    }
    if let Curve::Arc(a) = c {
        write!(out, " ends {} {}", a.start.face, a.end.face).unwrap();
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fixtures;

    #[test]
    fn round_trip_fixtures() {
        for s in [fixtures::torus_schema(), fixtures::pants(), fixtures::grid_torus_perforated(3, 3), fixtures::annulus()] {
            let text = write_surface(&s);
            let back = parse_surface(&text).unwrap();
            assert_eq!(back, s);
            assert_eq!(write_surface(&back), text);
        }
    }

    #[test]
    fn fractional_weights() {
        let s = parse_surface("surface 1 2\nrot 0 0 2 1 3\nw 0 3/6\nw 1 2\n").unwrap();
        assert_eq!(format_rational(s.weight(0)), "1/2");
        assert_eq!(format_rational(s.weight(1)), "2/1");
    }

    #[test]
    fn errors_carry_line_numbers() {
        let missing = "surface 1 2\nrot 0 0 2 1\nw 0 1\nw 1 1\n";
        assert!(matches!(parse_surface(missing), Err(Error::Parse { line: 4, .. })));
        let dup = "surface 1 2\nrot 0 0 2 1 0\nw 0 1\nw 1 1\n";
        assert!(matches!(parse_surface(dup), Err(Error::Parse { line: 2, .. })));
        let bad_face = "surface 1 2\nrot 0 0 2 1 3\nw 0 1\nw 1 1\nperforate 5\n";
        assert!(matches!(parse_surface(bad_face), Err(Error::Parse { line: 5, .. })));
        let zero = "surface 1 2\nrot 0 0 2 1 3\nw 0 0\nw 1 1\n";
        assert!(matches!(parse_surface(zero), Err(Error::Parse { line: 3, .. })));
    }

    #[test]
    fn curve_lines() {
        let p = fixtures::pants();
        let c = parse_curve_line(&p, "walk open 4 ends 1 1", 1).unwrap();
        assert_eq!(write_curve(&c), "walk open 4 ends 1 1");
        let l = parse_curve_line(&p, "walk closed 0 3", 1).unwrap();
        assert!(l.is_closed());
        assert!(parse_curve_line(&p, "walk closed 0 2", 1).is_err());
        assert!(parse_curve_line(&p, "walk open 4", 1).is_err());
    }
}
