//! The shipped variety catalogue.
//!
//! The `.vty` files under `catalogue/` are embedded verbatim; names resolve
//! to their contents byte-for-byte, and each file is in the canonical form
//! the description formatter produces.

use crate::field::Fp;
use crate::variety::{Variety, VarietyError, VarietySpec};

pub const NAMES: [&str; 7] = [
    "twisted_cubic",
    "conic",
    "skew_line_01",
    "skew_line_23",
    "fermat_cubic",
    "generic_quartic_curve",
    "p2_identity",
];

/// Raw file contents for a catalogue name.
pub fn source(name: &str) -> Option<&'static str> {
    match name {
        "twisted_cubic" => Some(include_str!("../catalogue/twisted_cubic.vty")),
        "conic" => Some(include_str!("../catalogue/conic.vty")),
        "skew_line_01" => Some(include_str!("../catalogue/skew_line_01.vty")),
        "skew_line_23" => Some(include_str!("../catalogue/skew_line_23.vty")),
        "fermat_cubic" => Some(include_str!("../catalogue/fermat_cubic.vty")),
        "generic_quartic_curve" => Some(include_str!("../catalogue/generic_quartic_curve.vty")),
        "p2_identity" => Some(include_str!("../catalogue/p2_identity.vty")),
        _ => None,
    }
}

pub fn spec(name: &str) -> Result<VarietySpec, VarietyError> {
    let text = source(name).ok_or_else(|| {
        VarietyError::BadDescription(format!(
            "no catalogue entry `{name}`; available: {}",
            NAMES.join(", ")
        ))
    })?;
    VarietySpec::parse(text)
}

pub fn load(name: &str, fp: &Fp) -> Result<Variety, VarietyError> {
    spec(name)?.instantiate(fp)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::matrix::Matrix;

    #[test]
    fn every_entry_parses_and_roundtrips_byte_exactly() {
        for name in NAMES {
            let text = source(name).unwrap();
            let spec = VarietySpec::parse(text).unwrap();
            assert_eq!(spec.name, name);
            assert_eq!(spec.format(), text, "{name} is not in canonical form");
        }
    }

    #[test]
    fn every_entry_instantiates() {
        let fp = Fp::new(101);
        for name in NAMES {
            let v = load(name, &fp).unwrap();
            assert_eq!(v.name(), name);
        }
    }

    #[test]
    fn quartic_curve_is_nondegenerate() {
        // its four components must be linearly independent quartics, so the
        // curve spans P^3
        let fp = Fp::new(101);
        let v = load("generic_quartic_curve", &fp).unwrap();
        let map = v.param_map().unwrap();
        let rows: Vec<Vec<u64>> = map
            .components
            .iter()
            .map(|c| {
                (0..=4u32)
                    .map(|i| {
                        let target = vec![4 - i, i];
                        c.terms()
                            .iter()
                            .find(|(e, _)| *e == target)
                            .map(|(_, c)| *c)
                            .unwrap_or(0)
                    })
                    .collect()
            })
            .collect();
        assert_eq!(Matrix::from_rows(rows).rank(&fp), 4);
    }

    #[test]
    fn unknown_names_are_reported() {
        assert!(matches!(
            spec("nope"),
            Err(VarietyError::BadDescription(msg)) if msg.contains("nope")
        ));
    }
}
