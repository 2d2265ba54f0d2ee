//! WebAssembly bindings for the static page in `www/`.
//!
//! The page draws a weighted toroidal grid, highlights its first three
//! systoles, and lists the length spectrum. Each exported function has a
//! plain-Rust twin returning `Result<String, String>` so the logic can be
//! tested natively; the exports only convert errors into JS exceptions.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde_json::json;
use wasm_bindgen::prelude::*;

use systole_core::{fixtures, format, format_rational, oracle, systoles};

/// Text encoding of a `rows × cols` grid torus with weights drawn from
/// `1..=max_weight` (all ones when `max_weight <= 1`).
pub fn grid_text(rows: usize, cols: usize, max_weight: u64, seed: u64) -> Result<String, String> {
    if !(1..=40).contains(&rows) || !(1..=40).contains(&cols) {
        return Err("rows and cols must be between 1 and 40".into());
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let weights: Vec<u64> = (0..2 * rows * cols).map(|_| if max_weight <= 1 { 1 } else { rng.gen_range(1..=max_weight) }).collect();
    Ok(format::write_surface(&fixtures::grid_torus_weighted(rows, cols, |e| weights[e])))
}

/// JSON array with one object per systole: `k`, `length` (`p/q`), `case`
/// and `walk` (half-edge ids).
pub fn systoles_json(surface: &str, k: usize) -> Result<String, String> {
    let s = format::parse_surface(surface).map_err(|e| e.to_string())?;
    let reports = systoles::systoles(&s, k).map_err(|e| e.to_string())?;
    let rows: Vec<_> = reports
        .iter()
        .map(|r| {
            json!({
                "k": r.k,
                "length": format_rational(&r.length),
                "case": r.case.name(),
                "walk": r.walk.half_edges.iter().map(|h| h.0).collect::<Vec<_>>(),
            })
        })
        .collect();
    Ok(serde_json::Value::Array(rows).to_string())
}

/// JSON array of `{length, walk}` for every class up to `bound`.
pub fn spectrum_json(surface: &str, bound: &str) -> Result<String, String> {
    let s = format::parse_surface(surface).map_err(|e| e.to_string())?;
    let b = format::parse_rational(bound).ok_or_else(|| format!("invalid bound `{bound}`"))?;
    let entries = oracle::enumerate_spectrum_capped(&s, &b, 200_000).map_err(|e| e.to_string())?;
    let rows: Vec<_> = entries
        .iter()
        .map(|e| json!({"length": format_rational(&s.to_rational(e.units)), "walk": e.walk.half_edges.iter().map(|h| h.0).collect::<Vec<_>>()}))
        .collect();
    Ok(serde_json::Value::Array(rows).to_string())
}

#[wasm_bindgen]
pub fn grid_torus_surface(rows: usize, cols: usize, max_weight: u32, seed: u32) -> Result<String, JsError> {
    grid_text(rows, cols, max_weight as u64, seed as u64).map_err(|e| JsError::new(&e))
}

#[wasm_bindgen]
pub fn compute_systoles(surface: &str, k: usize) -> Result<String, JsError> {
    systoles_json(surface, k).map_err(|e| JsError::new(&e))
}

#[wasm_bindgen]
pub fn spectrum(surface: &str, bound: &str) -> Result<String, JsError> {
    spectrum_json(surface, bound).map_err(|e| JsError::new(&e))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn unit_grid_systoles() {
        let text = grid_text(3, 3, 1, 0).unwrap();
        let v: serde_json::Value = serde_json::from_str(&systoles_json(&text, 3).unwrap()).unwrap();
        let lengths: Vec<&str> = v.as_array().unwrap().iter().map(|r| r["length"].as_str().unwrap()).collect();
        assert_eq!(lengths, ["3/1", "3/1", "6/1"]);
    }

    #[test]
    fn weighted_grid_is_reproducible() {
        assert_eq!(grid_text(4, 5, 5, 9).unwrap(), grid_text(4, 5, 5, 9).unwrap());
        assert_ne!(grid_text(4, 5, 5, 9).unwrap(), grid_text(4, 5, 5, 10).unwrap());
    }

    #[test]
    fn spectrum_prefix() {
        let text = grid_text(3, 3, 1, 0).unwrap();
        let v: serde_json::Value = serde_json::from_str(&spectrum_json(&text, "6").unwrap()).unwrap();
        let lengths: Vec<&str> = v.as_array().unwrap().iter().take(3).map(|r| r["length"].as_str().unwrap()).collect();
        assert_eq!(lengths, ["3/1", "3/1", "6/1"]);
    }

    #[test]
    fn errors_are_messages() {
        assert!(grid_text(0, 3, 1, 0).is_err());
        assert!(systoles_json("surface 1", 1).unwrap_err().contains("line"));
        assert!(spectrum_json(&grid_text(2, 2, 1, 0).unwrap(), "x").is_err());
    }
}
