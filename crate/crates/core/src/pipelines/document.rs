use super::{Family, Pipeline, PipelineSpec, Projection};
use crate::kvdoc::KvDoc;
use crate::{Error, Real, Result};

pub const DOCUMENT_VERSION: u32 = 1;
const HEADER: &str = "kachash pipeline";
const FIELDS: [&str; 7] = [
    "version",
    "family",
    "projection",
    "input_dim",
    "padded_dim",
    "output_dim",
    "master_seed",
];

/// Seed-only text form of a pipeline. Components are regenerated on load.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PipelineDocument {
    pub spec: PipelineSpec,
}

impl PipelineDocument {
    pub fn render(&self) -> String {
        let s = &self.spec;
        let mut d = KvDoc::new();
        d.push("version", DOCUMENT_VERSION)
            .push("family", s.family)
            .push("projection", s.projection)
            .push("input_dim", s.input_dim)
            .push("padded_dim", s.padded_dim)
            .push("output_dim", s.output_dim)
            .push("master_seed", s.master_seed);
        d.render(HEADER)
    }

    pub fn parse(text: &str) -> Result<Self> {
        let d = KvDoc::parse(text)?;
        if let Some(k) = d.keys().find(|k| !FIELDS.contains(k)) {
            return Err(d.error_at(k, "unknown field"));
        }
        let version: u32 = d.require_parsed("version")?;
        if version != DOCUMENT_VERSION {
            return Err(d.error_at(
                "version",
                format!("unsupported version {version}, expected {DOCUMENT_VERSION}"),
            ));
        }
        let family: Family = d
            .require("family")?
            .parse()
            .map_err(|e: Error| d.error_at("family", e.to_string()))?;
        let projection: Projection = d
            .require("projection")?
            .parse()
            .map_err(|e: Error| d.error_at("projection", e.to_string()))?;
        let spec = PipelineSpec {
            family,
            projection,
            input_dim: d.require_parsed("input_dim")?,
            padded_dim: d.require_parsed("padded_dim")?,
            output_dim: d.require_parsed("output_dim")?,
            master_seed: d.require_parsed("master_seed")?,
        };
        spec.validate()
            .map_err(|e| Error::parse("document", e.to_string()))?;
        Ok(Self { spec })
    }
}

pub fn serialize_pipeline<T: Real>(p: &Pipeline<T>) -> Result<PipelineDocument> {
    if !p.is_seed_derived() {
        return Err(Error::Config(
            "pipeline was assembled from explicit components and has no seed-only form".into(),
        ));
    }
    Ok(PipelineDocument { spec: *p.spec() })
}

pub fn deserialize_pipeline<T: Real>(doc: &PipelineDocument) -> Result<Pipeline<T>> {
    Pipeline::build(doc.spec)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn kac_doc() -> PipelineDocument {
        let spec = PipelineSpec::new(Family::ExtendedKac, Projection::Circulant, 1024, 392, 7).unwrap();
        serialize_pipeline(&Pipeline::<f64>::build(spec).unwrap()).unwrap()
    }

    #[test]
    fn round_trip_hashes_identically() {
        let doc = kac_doc();
        let text = doc.render();
        assert!(text.len() < 1024, "{} bytes", text.len());
        let back = PipelineDocument::parse(&text).unwrap();
        assert_eq!(back, doc);
        let a = deserialize_pipeline::<f64>(&doc).unwrap();
        let b = deserialize_pipeline::<f64>(&back).unwrap();
        let data = crate::data::gaussian_points::<f64>(100, 1024, 1).unwrap();
        assert_eq!(a.hash_batch(&data).unwrap(), b.hash_batch(&data).unwrap());
    }

    #[test]
    fn unknown_family_names_field() {
        let text = kac_doc().render().replace("extended_kac", "extended_foo");
        let err = PipelineDocument::parse(&text).unwrap_err();
        let msg = err.to_string();
        assert!(matches!(err, Error::Parse { .. }));
        assert!(msg.contains("family") && msg.contains("line 3"), "{msg}");
    }

    #[test]
    fn version_and_malformed() {
        let text = kac_doc().render().replace("version = 1", "version = 2");
        assert!(PipelineDocument::parse(&text).unwrap_err().to_string().contains("version"));
        let text = kac_doc().render().replace("output_dim = 392", "output_dim = lots");
        assert!(PipelineDocument::parse(&text).unwrap_err().to_string().contains("output_dim"));
        let text = kac_doc().render().replace("master_seed = 7\n", "");
        assert!(PipelineDocument::parse(&text).unwrap_err().to_string().contains("master_seed"));
        let text = kac_doc().render() + "extra = 1\n";
        assert!(PipelineDocument::parse(&text).unwrap_err().to_string().contains("extra"));
        let text = kac_doc().render().replace("padded_dim = 1024", "padded_dim = 2048");
        assert!(PipelineDocument::parse(&text).is_err());
    }
}
