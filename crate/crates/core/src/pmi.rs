//! Manifest ingestion and post-mortem-interval (PMI) class binning.
//!
//! Samples are grouped into 18 classes of 24 hours each; class 18 is
//! open-ended above 408 h. Bins are half-open, `((k-1)*24, k*24]`, so every
//! positive real PMI maps to exactly one class.

use std::collections::BTreeMap;
use std::fmt;
use std::io::Write;
use std::path::Path;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

pub const NUM_CLASSES: u8 = 18;
const HOURS_PER_CLASS: f64 = 24.0;
/// Upper bound of class 17; everything above goes to class 18.
const LAST_BOUNDED_HOUR: f64 = 408.0;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Eye {
    Left,
    Right,
    Unknown,
}

impl Eye {
    pub fn parse(token: &str) -> Option<Eye> {
        match token {
            "L" => Some(Eye::Left),
            "R" => Some(Eye::Right),
            "U" => Some(Eye::Unknown),
            _ => None,
        }
    }

    pub fn code(&self) -> &'static str {
        match self {
            Eye::Left => "L",
            Eye::Right => "R",
            Eye::Unknown => "U",
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum SourceDataset {
    WarsawV2,
    WarsawV3,
    NijDcmeo,
    Synthetic,
    Other,
}

impl SourceDataset {
    pub fn parse(token: &str) -> Option<SourceDataset> {
        match token {
            "warsaw_v2" => Some(SourceDataset::WarsawV2),
            "warsaw_v3" => Some(SourceDataset::WarsawV3),
            "nij_dcmeo" => Some(SourceDataset::NijDcmeo),
            "synthetic" => Some(SourceDataset::Synthetic),
            "other" => Some(SourceDataset::Other),
            _ => None,
        }
    }

    pub fn code(&self) -> &'static str {
        match self {
            SourceDataset::WarsawV2 => "warsaw_v2",
            SourceDataset::WarsawV3 => "warsaw_v3",
            SourceDataset::NijDcmeo => "nij_dcmeo",
            SourceDataset::Synthetic => "synthetic",
            SourceDataset::Other => "other",
        }
    }
}

/// One manifest row: an image together with its acquisition metadata.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ManifestEntry {
    pub image_path: String,
    pub subject_id: String,
    pub pmi_hours: f64,
    pub eye: Eye,
    pub session_id: String,
    pub source_dataset: SourceDataset,
}

impl ManifestEntry {
    /// Sample identifier used throughout the pipeline to join manifests,
    /// segmentation sidecars, codes and score rows: the image path's file
    /// stem.
    pub fn sample_id(&self) -> String {
        Path::new(&self.image_path)
            .file_stem()
            .map(|s| s.to_string_lossy().into_owned())
            .unwrap_or_else(|| self.image_path.clone())
    }
}

/// One of the 18 PMI bins.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct PmiClass {
    pub index: u8,
    pub lower_hours: f64,
    /// `None` for the open-ended last class.
    pub upper_hours: Option<f64>,
}

impl PmiClass {
    pub fn from_index(index: u8) -> Result<PmiClass> {
        if index == 0 || index > NUM_CLASSES {
            return Err(Error::InvalidInput(format!(
                "PMI class index {index} out of range 1..={NUM_CLASSES}"
            )));
        }
        let lower = (index as f64 - 1.0) * HOURS_PER_CLASS;
        let upper = if index < NUM_CLASSES {
            Some(index as f64 * HOURS_PER_CLASS)
        } else {
            None
        };
        Ok(PmiClass {
            index,
            lower_hours: lower,
            upper_hours: upper,
        })
    }
}

impl fmt::Display for PmiClass {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self.upper_hours {
            Some(u) => write!(f, "class {} ({}h-{}h]", self.index, self.lower_hours, u),
            None => write!(f, "class {} (>{}h)", self.index, self.lower_hours),
        }
    }
}

/// Assigns the PMI class for a positive number of hours since death.
///
/// Classes 1..=17 cover `((k-1)*24, k*24]`; anything above 408 h falls into
/// class 18.
pub fn assign_pmi_class(pmi_hours: f64) -> Result<PmiClass> {
    if !pmi_hours.is_finite() || pmi_hours <= 0.0 {
        return Err(Error::InvalidInput(format!(
            "pmi_hours must be a positive finite number, got {pmi_hours}"
        )));
    }
    if pmi_hours > LAST_BOUNDED_HOUR {
        return PmiClass::from_index(NUM_CLASSES);
    }
    let k = (pmi_hours / HOURS_PER_CLASS).ceil() as u8;
    PmiClass::from_index(k.max(1))
}

/// Per-class sample counts over a manifest.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ClassInventory {
    counts: Vec<u64>,
}

impl ClassInventory {
    pub fn empty() -> Self {
        ClassInventory {
            counts: vec![0; NUM_CLASSES as usize],
        }
    }

    pub fn count(&self, class_index: u8) -> u64 {
        self.counts[(class_index - 1) as usize]
    }

    pub fn total(&self) -> u64 {
        self.counts.iter().sum()
    }

    /// `class_index,lower_hours,upper_hours,count` rows; `inf` marks the
    /// open upper bound of class 18.
    pub fn write_csv(&self, mut w: impl Write) -> Result<()> {
        writeln!(w, "class_index,lower_hours,upper_hours,count")?;
        for index in 1..=NUM_CLASSES {
            let class = PmiClass::from_index(index)?;
            let upper = match class.upper_hours {
                Some(u) => format!("{u}"),
                None => "inf".to_string(),
            };
            writeln!(w, "{},{},{},{}", index, class.lower_hours, upper, self.count(index))?;
        }
        Ok(())
    }
}

/// Counts manifest entries per PMI class.
pub fn inventory(entries: &[ManifestEntry]) -> Result<ClassInventory> {
    let mut inv = ClassInventory::empty();
    for entry in entries {
        let class = assign_pmi_class(entry.pmi_hours)?;
        inv.counts[(class.index - 1) as usize] += 1;
    }
    Ok(inv)
}

pub const MANIFEST_HEADER: [&str; 6] = [
    "image_path",
    "subject_id",
    "pmi_hours",
    "eye",
    "session_id",
    "source_dataset",
];

/// Loads a manifest CSV. Row order is preserved; the first malformed row
/// aborts the load with the row number and offending field.
pub fn load_manifest(path: &Path) -> Result<Vec<ManifestEntry>> {
    let file = std::fs::File::open(path).map_err(|e| {
        Error::format(path.display().to_string(), format!("cannot open manifest: {e}"))
    })?;
    let mut reader = csv::ReaderBuilder::new()
        .has_headers(true)
        .trim(csv::Trim::All)
        .from_reader(file);

    let headers = reader
        .headers()
        .map_err(|e| Error::format(path.display().to_string(), format!("bad header: {e}")))?
        .clone();
    let got: Vec<&str> = headers.iter().collect();
    if got != MANIFEST_HEADER {
        return Err(Error::format(
            path.display().to_string(),
            format!("manifest header must be `{}`, got `{}`", MANIFEST_HEADER.join(","), got.join(",")),
        ));
    }

    let mut entries = Vec::new();
    for (i, record) in reader.records().enumerate() {
        // header is line 1; first data row is line 2
        let row = i + 2;
        let record = record.map_err(|e| Error::ManifestParse {
            row,
            field: "<record>",
            message: e.to_string(),
        })?;
        if record.len() != MANIFEST_HEADER.len() {
            return Err(Error::ManifestParse {
                row,
                field: "<record>",
                message: format!("expected {} fields, got {}", MANIFEST_HEADER.len(), record.len()),
            });
        }
        entries.push(parse_row(&record, row)?);
    }
    Ok(entries)
}

fn parse_row(record: &csv::StringRecord, row: usize) -> Result<ManifestEntry> {
    let image_path = record[0].to_string();
    if image_path.is_empty() {
        return Err(Error::ManifestParse {
            row,
            field: "image_path",
            message: "must be non-empty".into(),
        });
    }
    let pmi_hours: f64 = record[2].parse().map_err(|e| Error::ManifestParse {
        row,
        field: "pmi_hours",
        message: format!("`{}`: {e}", &record[2]),
    })?;
    if !pmi_hours.is_finite() || pmi_hours < 0.0 {
        return Err(Error::ManifestParse {
            row,
            field: "pmi_hours",
            message: format!("must be a non-negative finite number, got {pmi_hours}"),
        });
    }
    let eye = Eye::parse(&record[3]).ok_or_else(|| Error::ManifestParse {
        row,
        field: "eye",
        message: format!("`{}` is not one of L, R, U", &record[3]),
    })?;
    let source_dataset = SourceDataset::parse(&record[5]).ok_or_else(|| Error::ManifestParse {
        row,
        field: "source_dataset",
        message: format!(
            "`{}` is not one of warsaw_v2, warsaw_v3, nij_dcmeo, synthetic, other",
            &record[5]
        ),
    })?;
    Ok(ManifestEntry {
        image_path,
        subject_id: record[1].to_string(),
        pmi_hours,
        eye,
        session_id: record[4].to_string(),
        source_dataset,
    })
}

/// Writes a manifest in the canonical CSV format.
pub fn write_manifest(entries: &[ManifestEntry], mut w: impl Write) -> Result<()> {
    writeln!(w, "{}", MANIFEST_HEADER.join(","))?;
    for e in entries {
        writeln!(
            w,
            "{},{},{},{},{},{}",
            e.image_path,
            e.subject_id,
            e.pmi_hours,
            e.eye.code(),
            e.session_id,
            e.source_dataset.code()
        )?;
    }
    Ok(())
}

/// sample_id -> PMI class index lookup used for per-class partitioning.
pub fn class_lookup(entries: &[ManifestEntry]) -> Result<BTreeMap<String, u8>> {
    let mut map = BTreeMap::new();
    for entry in entries {
        let class = assign_pmi_class(entry.pmi_hours)?;
        map.insert(entry.sample_id(), class.index);
    }
    Ok(map)
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::io::Write as _;

    #[test]
    fn assigns_first_class_within_first_day() {
        assert_eq!(assign_pmi_class(10.0).unwrap().index, 1);
    }

    #[test]
    fn assigns_second_class_on_second_day() {
        assert_eq!(assign_pmi_class(30.0).unwrap().index, 2);
    }

    #[test]
    fn consolidates_long_intervals_into_last_class() {
        assert_eq!(assign_pmi_class(500.0).unwrap().index, 18);
        assert_eq!(assign_pmi_class(1674.0).unwrap().index, 18);
        // open-ended: values beyond the observed maximum still bin cleanly
        assert_eq!(assign_pmi_class(1e6).unwrap().index, 18);
    }

    #[test]
    fn boundary_hours_belong_to_the_lower_class() {
        assert_eq!(assign_pmi_class(24.0).unwrap().index, 1);
        assert_eq!(assign_pmi_class(24.000001).unwrap().index, 2);
        assert_eq!(assign_pmi_class(48.0).unwrap().index, 2);
        assert_eq!(assign_pmi_class(408.0).unwrap().index, 17);
        assert_eq!(assign_pmi_class(408.0000001).unwrap().index, 18);
    }

    #[test]
    fn rejects_non_positive_and_non_finite() {
        assert!(assign_pmi_class(0.0).is_err());
        assert!(assign_pmi_class(-3.0).is_err());
        assert!(assign_pmi_class(f64::NAN).is_err());
        assert!(assign_pmi_class(f64::INFINITY).is_err());
    }

    #[test]
    fn class_bounds_partition_positive_reals() {
        let c1 = PmiClass::from_index(1).unwrap();
        assert_eq!((c1.lower_hours, c1.upper_hours), (0.0, Some(24.0)));
        let c17 = PmiClass::from_index(17).unwrap();
        assert_eq!((c17.lower_hours, c17.upper_hours), (384.0, Some(408.0)));
        let c18 = PmiClass::from_index(18).unwrap();
        assert_eq!((c18.lower_hours, c18.upper_hours), (408.0, None));
    }

    fn entry(pmi: f64) -> ManifestEntry {
        ManifestEntry {
            image_path: format!("img_{pmi}.png"),
            subject_id: "s1".into(),
            pmi_hours: pmi,
            eye: Eye::Left,
            session_id: "sess".into(),
            source_dataset: SourceDataset::Other,
        }
    }

    #[test]
    fn inventory_counts_by_class() {
        // one entry at each class midpoint: 12, 36, ..., 396, then 500 for
        // the open class
        let mut entries: Vec<ManifestEntry> =
            (0..17).map(|k| entry(12.0 + 24.0 * k as f64)).collect();
        entries.push(entry(500.0));
        let inv = inventory(&entries).unwrap();
        for index in 1..=18 {
            assert_eq!(inv.count(index), 1, "class {index}");
        }
        assert_eq!(inv.total(), 18);
    }

    #[test]
    fn empty_manifest_gives_zero_inventory() {
        let inv = inventory(&[]).unwrap();
        assert_eq!(inv.total(), 0);
    }

    #[test]
    fn inventory_matches_constructed_counts() {
        let mut entries = Vec::new();
        for i in 0..2490 {
            entries.push(entry(0.5 + (i as f64 % 47.0) * 0.5)); // all in (0, 24]
        }
        for i in 0..1542 {
            entries.push(entry(24.5 + (i as f64 % 46.0) * 0.5)); // all in (24, 48]
        }
        let inv = inventory(&entries).unwrap();
        assert_eq!(inv.count(1), 2490);
        assert_eq!(inv.count(2), 1542);
        assert_eq!(inv.total(), entries.len() as u64);
    }

    fn write_temp_manifest(content: &str) -> (tempfile::TempDir, std::path::PathBuf) {
        let dir = tempfile::tempdir().unwrap();
        let path = dir.path().join("manifest.csv");
        let mut f = std::fs::File::create(&path).unwrap();
        f.write_all(content.as_bytes()).unwrap();
        (dir, path)
    }

    #[test]
    fn load_manifest_well_formed() {
        let (_dir, path) = write_temp_manifest(
            "image_path,subject_id,pmi_hours,eye,session_id,source_dataset\n\
             a/x.png,s1,10,L,sess1,warsaw_v2\n\
             a/y.png,s1,30.5,R,sess2,nij_dcmeo\n\
             b/z.png,s2,500,U,sess3,synthetic\n",
        );
        let entries = load_manifest(&path).unwrap();
        assert_eq!(entries.len(), 3);
        assert_eq!(entries[0].sample_id(), "x");
        assert_eq!(entries[1].pmi_hours, 30.5);
        assert_eq!(entries[2].source_dataset, SourceDataset::Synthetic);
    }

    #[test]
    fn load_manifest_reports_row_and_field() {
        let (_dir, path) = write_temp_manifest(
            "image_path,subject_id,pmi_hours,eye,session_id,source_dataset\n\
             a/x.png,s1,10,L,sess1,warsaw_v2\n\
             a/y.png,s1,abc,R,sess2,warsaw_v2\n",
        );
        let err = load_manifest(&path).unwrap_err();
        match err {
            Error::ManifestParse { row, field, .. } => {
                assert_eq!(row, 3);
                assert_eq!(field, "pmi_hours");
            }
            other => panic!("unexpected error {other:?}"),
        }
    }

    #[test]
    fn load_manifest_header_only_is_empty() {
        let (_dir, path) =
            write_temp_manifest("image_path,subject_id,pmi_hours,eye,session_id,source_dataset\n");
        assert!(load_manifest(&path).unwrap().is_empty());
    }

    #[test]
    fn load_manifest_rejects_wrong_header() {
        let (_dir, path) = write_temp_manifest("path,subject,pmi\n");
        assert!(load_manifest(&path).is_err());
    }

    #[test]
    fn manifest_round_trip() {
        let entries = vec![entry(10.0), entry(402.25)];
        let mut buf = Vec::new();
        write_manifest(&entries, &mut buf).unwrap();
        let dir = tempfile::tempdir().unwrap();
        let path = dir.path().join("m.csv");
        std::fs::write(&path, &buf).unwrap();
        assert_eq!(load_manifest(&path).unwrap(), entries);
    }

    #[test]
    fn inventory_csv_has_inf_open_bound() {
        let inv = inventory(&[entry(10.0)]).unwrap();
        let mut buf = Vec::new();
        inv.write_csv(&mut buf).unwrap();
        let text = String::from_utf8(buf).unwrap();
        let lines: Vec<&str> = text.lines().collect();
        assert_eq!(lines[0], "class_index,lower_hours,upper_hours,count");
        assert_eq!(lines[1], "1,0,24,1");
        assert_eq!(lines[18], "18,408,inf,0");
    }
}
