//! Dataset CSV ingestion and the four embedded reference datasets.
//!
//! The CSV layout is three columns in fixed order, `time,event,group`, with
//! `event` in {0, 1} (0 = censored) and `group` in {1, 2}. A header line is
//! optional and detected by its first field not being a number.

use std::fmt;
use std::path::Path;
use std::str::FromStr;

use crate::error::{Error, Result};
use crate::observation::{Observation, TwoSampleDataset};

/// The embedded datasets. Group 1 is the first group listed for each.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum EmbeddedId {
    /// Locally advanced nonresectable gastric carcinoma: chemotherapy plus
    /// radiation (group 1, 45) against chemotherapy alone (group 2, 45).
    Gastric,
    /// Vaginal cancer in DMBA-exposed rats, two pretreatment regimes
    /// (19 and 21 animals).
    DmbaRats,
    /// Multiple myeloma survival by sex: male (group 1, 29) and female
    /// (group 2, 19).
    Myeloma,
    /// Resected melanoma remission, BCG (group 1, 11) against C. parvum
    /// (group 2, 19).
    Melanoma,
}

impl EmbeddedId {
    pub const ALL: [EmbeddedId; 4] = [
        EmbeddedId::Gastric,
        EmbeddedId::DmbaRats,
        EmbeddedId::Myeloma,
        EmbeddedId::Melanoma,
    ];

    pub fn name(self) -> &'static str {
        match self {
            EmbeddedId::Gastric => "gastric",
            EmbeddedId::DmbaRats => "dmba_rats",
            EmbeddedId::Myeloma => "myeloma",
            EmbeddedId::Melanoma => "melanoma",
        }
    }

    pub fn description(self) -> &'static str {
        match self {
            EmbeddedId::Gastric => "gastric carcinoma trial: chemotherapy + radiation vs chemotherapy",
            EmbeddedId::DmbaRats => "vaginal cancer in DMBA-exposed rats: two pretreatment regimes",
            EmbeddedId::Myeloma => "multiple myeloma survival: male vs female",
            EmbeddedId::Melanoma => "melanoma remission after resection: BCG vs C. parvum",
        }
    }

    pub fn group_labels(self) -> [&'static str; 2] {
        match self {
            EmbeddedId::Gastric => ["chemotherapy+radiation", "chemotherapy"],
            EmbeddedId::DmbaRats => ["group 1", "group 2"],
            EmbeddedId::Myeloma => ["male", "female"],
            EmbeddedId::Melanoma => ["BCG", "C. parvum"],
        }
    }

    /// The raw CSV text.
    pub fn csv(self) -> &'static str {
        match self {
            EmbeddedId::Gastric => include_str!("../data/datasets/gastric.csv"),
            EmbeddedId::DmbaRats => include_str!("../data/datasets/dmba_rats.csv"),
            EmbeddedId::Myeloma => include_str!("../data/datasets/myeloma.csv"),
            EmbeddedId::Melanoma => include_str!("../data/datasets/melanoma.csv"),
        }
    }
}

impl fmt::Display for EmbeddedId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for EmbeddedId {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        EmbeddedId::ALL.into_iter().find(|id| id.name() == s).ok_or_else(|| {
            Error::InvalidArgument(format!(
                "unknown dataset {s:?} (expected one of gastric, dmba_rats, myeloma, melanoma)"
            ))
        })
    }
}

/// Parses an embedded dataset.
pub fn embedded(id: EmbeddedId) -> Result<TwoSampleDataset> {
    parse_csv(id.csv())
}

fn field_error(line: u64, field: &str, msg: impl fmt::Display) -> Error {
    Error::Parse {
        line,
        message: format!("field `{field}`: {msg}"),
    }
}

/// Parses dataset CSV text.
pub fn parse_csv(text: &str) -> Result<TwoSampleDataset> {
    let mut reader = csv::ReaderBuilder::new()
        .has_headers(false)
        .trim(csv::Trim::All)
        .comment(Some(b'#'))
        .flexible(true)
        .from_reader(text.as_bytes());
    let mut group1 = Vec::new();
    let mut group2 = Vec::new();
    let mut first = true;
    for record in reader.records() {
        let record = record.map_err(|e| Error::Parse {
            line: e.position().map_or(0, |p| p.line()),
            message: e.to_string(),
        })?;
        let line = record.position().map_or(0, |p| p.line());
        if record.iter().all(str::is_empty) {
            continue;
        }
        if std::mem::take(&mut first) && record.get(0).is_some_and(|f| f.parse::<f64>().is_err()) {
            continue;
        }
        if record.len() != 3 {
            return Err(Error::Parse {
                line,
                message: format!("expected 3 fields (time,event,group), found {}", record.len()),
            });
        }
        let time: f64 = record[0]
            .parse()
            .map_err(|_| field_error(line, "time", format!("not a number: {:?}", &record[0])))?;
        if !time.is_finite() || time < 0.0 {
            return Err(field_error(
                line,
                "time",
                format!("must be finite and >= 0, got {}", &record[0]),
            ));
        }
        let event = match &record[1] {
            "0" => false,
            "1" => true,
            other => return Err(field_error(line, "event", format!("must be 0 or 1, got {other:?}"))),
        };
        let obs = Observation::new(time, event)?;
        match &record[2] {
            "1" => group1.push(obs),
            "2" => group2.push(obs),
            other => return Err(field_error(line, "group", format!("must be 1 or 2, got {other:?}"))),
        }
    }
    TwoSampleDataset::new(group1, group2)
}

/// Reads and parses a dataset CSV file.
pub fn read_csv(path: &Path) -> Result<TwoSampleDataset> {
    let text = std::fs::read_to_string(path).map_err(|source| Error::Io {
        path: path.to_path_buf(),
        source,
    })?;
    parse_csv(&text)
}

/// Serializes a dataset as CSV with a header. Times use the shortest
/// representation that parses back to the same value.
pub fn to_csv(ds: &TwoSampleDataset) -> String {
    let mut out = String::from("time,event,group\n");
    for (g, obs) in [(1, ds.group1()), (2, ds.group2())] {
        for o in obs {
            out.push_str(&format!("{},{},{}\n", o.time(), u8::from(o.is_event()), g));
        }
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use sha2::{Digest, Sha256};

    #[test]
    fn embedded_sizes() {
        let sizes: Vec<(usize, usize)> = EmbeddedId::ALL
            .iter()
            .map(|&id| {
                let ds = embedded(id).unwrap();
                (ds.n1(), ds.n2())
            })
            .collect();
        assert_eq!(sizes, vec![(45, 45), (19, 21), (29, 19), (11, 19)]);
    }

    #[test]
    fn checksums_match() {
        let sums = include_str!("../data/datasets/SHA256SUMS");
        for id in EmbeddedId::ALL {
            let file = format!("{}.csv", id.name());
            let line = sums.lines().find(|l| l.ends_with(&file)).expect("checksum listed");
            let want = line.split_whitespace().next().unwrap();
            let got: String = Sha256::digest(id.csv().as_bytes())
                .iter()
                .map(|b| format!("{b:02x}"))
                .collect();
            assert_eq!(got, want, "{file}");
        }
    }

    #[test]
    fn gastric_censored_row() {
        let ds = embedded(EmbeddedId::Gastric).unwrap();
        assert!(ds.group1().iter().any(|o| o.time() == 855.0 && o.is_censored()));
    }

    #[test]
    fn rows_parse() {
        let ds = parse_csv("12,1,1\n855,0,1\n3,1,2\n").unwrap();
        assert_eq!(ds.group1(), &[Observation::event(12.0), Observation::censored(855.0)]);
        assert_eq!(ds.n2(), 1);
    }

    #[test]
    fn header_optional() {
        let a = parse_csv("time,event,group\n1,1,1\n2,0,2\n").unwrap();
        let b = parse_csv("1,1,1\n2,0,2\n").unwrap();
        assert_eq!(a, b);
    }

    #[test]
    fn diagnostics_name_line_and_field() {
        let err = parse_csv("time,event,group\n1,1,1\n12,2,1\n").unwrap_err();
        match err {
            Error::Parse { line, message } => {
                assert_eq!(line, 3);
                assert!(message.contains("event"), "{message}");
            }
            e => panic!("unexpected {e}"),
        }
        assert!(matches!(
            parse_csv("-1,1,1\n2,1,2\n"),
            Err(Error::Parse { line: 1, .. })
        ));
        assert!(matches!(parse_csv("1,1,3\n"), Err(Error::Parse { line: 1, .. })));
        assert!(matches!(parse_csv("1,1\n"), Err(Error::Parse { .. })));
        assert!(matches!(parse_csv("1,x,1\n"), Err(Error::Parse { .. })));
        assert!(matches!(parse_csv("1,1,1\n2,1,1\n"), Err(Error::EmptyGroup(2))));
    }

    #[test]
    fn csv_round_trip() {
        for id in EmbeddedId::ALL {
            let ds = embedded(id).unwrap();
            assert_eq!(parse_csv(&to_csv(&ds)).unwrap(), ds);
        }
    }

    #[test]
    fn missing_file_is_io_error() {
        let err = read_csv(Path::new("/nonexistent/data.csv")).unwrap_err();
        assert!(matches!(err, Error::Io { .. }));
        assert!(err.to_string().contains("/nonexistent/data.csv"));
    }

    #[test]
    fn names_parse() {
        for id in EmbeddedId::ALL {
            assert_eq!(id.name().parse::<EmbeddedId>().unwrap(), id);
        }
        assert!("nope".parse::<EmbeddedId>().is_err());
    }
}
