use super::HoloPoly;
use crate::error::{Error, Result};
use crate::multi_index::MultiIndex;
use crate::C64;
use serde::{Deserialize, Serialize};

#[derive(Serialize, Deserialize)]
#[serde(rename_all = "camelCase")]
struct Doc {
    dim: usize,
    max_degree: usize,
    terms: Vec<Term>,
}

#[derive(Serialize, Deserialize)]
struct Term {
    alpha: Vec<u32>,
    re: f64,
    im: f64,
}

impl Serialize for HoloPoly {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        Doc {
            dim: self.dim,
            max_degree: self.max_degree,
            terms: self
                .coeffs
                .iter()
                .map(|(a, c)| Term { alpha: a.as_slice().to_vec(), re: c.re, im: c.im })
                .collect(),
        }
        .serialize(s)
    }
}

impl<'de> Deserialize<'de> for HoloPoly {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        let doc = Doc::deserialize(d)?;
        HoloPoly::from_terms(
            doc.dim,
            doc.max_degree,
            doc.terms.into_iter().map(|t| (MultiIndex::new(&t.alpha), C64::new(t.re, t.im))),
        )
        .map_err(serde::de::Error::custom)
    }
}

impl HoloPoly {
    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("polynomial serialization cannot fail")
    }

    pub fn from_json(text: &str) -> Result<HoloPoly> {
        serde_json::from_str(text).map_err(Error::from)
    }

    pub fn read_file(path: &std::path::Path) -> Result<HoloPoly> {
        HoloPoly::from_json(&std::fs::read_to_string(path)?)
    }

    pub fn write_file(&self, path: &std::path::Path) -> Result<()> {
        std::fs::write(path, self.to_json())?;
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn round_trip_and_order() {
        let f = HoloPoly::from_terms(
            2,
            3,
            vec![
                (MultiIndex::new(&[0, 2]), C64::new(1.0, -2.0)),
                (MultiIndex::new(&[1, 0]), C64::new(0.25, 0.0)),
                (MultiIndex::new(&[2, 0]), C64::new(0.0, 1.0)),
            ],
        )
        .unwrap();
        let text = f.to_json();
        let g = HoloPoly::from_json(&text).unwrap();
        assert_eq!(f, g);
        let pos = |needle: &str| text.find(needle).unwrap();
        assert!(pos("0.25") < pos("\"im\": 1.0"));
    }

    #[test]
    fn rejects_bad_documents() {
        let bad = r#"{"dim":2,"maxDegree":1,"terms":[{"alpha":[2,0],"re":1,"im":0}]}"#;
        assert!(HoloPoly::from_json(bad).is_err());
        let bad = r#"{"dim":2,"maxDegree":3,"terms":[{"alpha":[1],"re":1,"im":0}]}"#;
        assert!(HoloPoly::from_json(bad).is_err());
    }
}
