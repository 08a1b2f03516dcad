//! Sparse CSV form: a `# {json}` header line, then `j,a_j0,a_j1` rows.

use std::io::{BufRead, BufReader, Read, Write};

use serde::{Deserialize, Serialize};

use super::{Coefficient, CoefficientScheme, Provenance};
use crate::error::{Error, Result};

#[derive(Serialize, Deserialize)]
struct Header {
    provenance: Provenance,
    max_degree: u64,
}

impl CoefficientScheme {
    /// Writes the scheme; `f64` values use the shortest round-trip representation.
    pub fn write_csv<W: Write>(&self, mut out: W) -> Result<()> {
        let header = Header {
            provenance: self.provenance.clone(),
            max_degree: self.max_degree,
        };
        writeln!(out, "# {}", serde_json::to_string(&header)?)
            .map_err(|e| Error::io("<csv>", e))?;
        let mut w = csv::Writer::from_writer(out);
        w.write_record(["j", "a_j0", "a_j1"])?;
        for c in &self.entries {
            w.write_record([c.j.to_string(), c.cos.to_string(), c.sin.to_string()])?;
        }
        w.flush().map_err(|e| Error::io("<csv>", e))?;
        Ok(())
    }

    /// Reads a scheme written by [`CoefficientScheme::write_csv`].
    pub fn read_csv<R: Read>(input: R) -> Result<Self> {
        let mut reader = BufReader::new(input);
        let mut first = String::new();
        reader
            .read_line(&mut first)
            .map_err(|e| Error::io("<csv>", e))?;
        let json = first.trim_end().strip_prefix('#').ok_or_else(|| {
            Error::InvalidArgument("scheme CSV lacks its `# {json}` header".into())
        })?;
        let header: Header = serde_json::from_str(json.trim())?;
        let mut rows = csv::Reader::from_reader(reader);
        let mut entries = Vec::new();
        for record in rows.deserialize() {
            let (j, cos, sin): (u64, f64, f64) = record?;
            entries.push(Coefficient { j, cos, sin });
        }
        let blocks = header.provenance.blocks().ok().flatten();
        CoefficientScheme::from_entries(header.provenance, header.max_degree, entries, blocks)
    }
}

#[cfg(test)]
mod tests {
    use crate::schemes::{random_uniform_scheme, rudin_shapiro_scheme, CoefficientScheme};
    use crate::weight::{block_sequence, Weight};

    #[test]
    fn round_trip_is_lossless() {
        let b = block_sequence(&Weight::power(0.7).unwrap(), 2.0, 1, 6, true).unwrap();
        for s in [
            rudin_shapiro_scheme(&b).unwrap(),
            random_uniform_scheme(8, 50, true).unwrap(),
        ] {
            let mut buf = Vec::new();
            s.write_csv(&mut buf).unwrap();
            let back = CoefficientScheme::read_csv(buf.as_slice()).unwrap();
            assert_eq!(back, s);
        }
    }

    #[test]
    fn missing_header_is_rejected() {
        let text = "j,a_j0,a_j1\n1,1,0\n";
        assert!(CoefficientScheme::read_csv(text.as_bytes()).is_err());
    }
}
