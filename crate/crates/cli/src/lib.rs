//! Batch runner for `hazefuse`.
//!
//! A run is described by a CSV manifest with the header `rgb,nir,out[,label]`.
//! Relative paths are resolved against the manifest's directory. Each entry is
//! dehazed, written as PNG, and scored; the records are written as one JSON
//! array in manifest order.

use std::collections::HashSet;
use std::fs;
use std::path::{Path, PathBuf};
use std::time::Instant;

use hazefuse::image_io::requantize;
use hazefuse::{
    dehaze, load_pair, rgb_to_ycbcr, save_image, BitDepth, FusionConfig, HazeMapMode,
    MetricsReport, RgbImage,
};
use rayon::prelude::*;
use serde::{Deserialize, Serialize};
use thiserror::Error;

#[derive(Debug, Error)]
pub enum CliError {
    #[error("{context}: {source}")]
    Core {
        context: String,
        #[source]
        source: hazefuse::Error,
    },

    #[error("manifest {path}: {reason}")]
    ManifestParse { path: PathBuf, reason: String },

    #[error("i/o error on {path}: {source}")]
    Io {
        path: PathBuf,
        #[source]
        source: std::io::Error,
    },

    #[error("report {path}: {source}")]
    Json {
        path: PathBuf,
        #[source]
        source: serde_json::Error,
    },

    #[error("thread pool: {0}")]
    ThreadPool(String),
}

pub type Result<T> = std::result::Result<T, CliError>;

/// One pair to process.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ManifestEntry {
    pub rgb: PathBuf,
    pub nir: PathBuf,
    pub out: PathBuf,
    pub label: Option<String>,
}

impl ManifestEntry {
    /// The explicit label, or the output file stem.
    pub fn label(&self) -> String {
        self.label.clone().unwrap_or_else(|| {
            self.out
                .file_stem()
                .map(|s| s.to_string_lossy().into_owned())
                .unwrap_or_else(|| self.out.display().to_string())
        })
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct RunManifest {
    pub entries: Vec<ManifestEntry>,
    pub config: FusionConfig,
}

#[derive(Debug, Deserialize)]
struct ManifestRow {
    rgb: String,
    nir: String,
    out: String,
    #[serde(default)]
    label: Option<String>,
}

impl RunManifest {
    pub fn load(path: impl AsRef<Path>, config: FusionConfig) -> Result<Self> {
        let path = path.as_ref();
        let text = fs::read_to_string(path).map_err(|source| CliError::Io {
            path: path.to_path_buf(),
            source,
        })?;
        let base = path.parent().unwrap_or_else(|| Path::new(""));
        Self::parse(&text, base, config).map_err(|reason| CliError::ManifestParse {
            path: path.to_path_buf(),
            reason,
        })
    }

    /// Parses manifest text; relative paths are joined onto `base`.
    pub fn parse(text: &str, base: &Path, config: FusionConfig) -> std::result::Result<Self, String> {
        let mut reader = csv::ReaderBuilder::new()
            .trim(csv::Trim::All)
            .from_reader(text.as_bytes());
        let headers = reader.headers().map_err(|e| e.to_string())?.clone();
        let names: Vec<&str> = headers.iter().collect();
        if !(names == ["rgb", "nir", "out"] || names == ["rgb", "nir", "out", "label"]) {
            return Err(format!(
                "header must be rgb,nir,out[,label], found {}",
                names.join(",")
            ));
        }
        let resolve = |p: &str| {
            let p = Path::new(p);
            if p.is_absolute() {
                p.to_path_buf()
            } else {
                base.join(p)
            }
        };

        let mut entries = Vec::new();
        let mut seen = HashSet::new();
        for (i, row) in reader.deserialize::<ManifestRow>().enumerate() {
            let line = i + 2;
            let row = row.map_err(|e| format!("line {line}: {e}"))?;
            if row.rgb.is_empty() || row.nir.is_empty() || row.out.is_empty() {
                return Err(format!("line {line}: empty path"));
            }
            let label = row.label.filter(|l| !l.is_empty());
            if let Some(label) = &label {
                if !seen.insert(label.clone()) {
                    return Err(format!("line {line}: duplicate label {label:?}"));
                }
            }
            entries.push(ManifestEntry {
                rgb: resolve(&row.rgb),
                nir: resolve(&row.nir),
                out: resolve(&row.out),
                label,
            });
        }
        Ok(Self { entries, config })
    }
}

/// The config fields echoed into every report record.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ConfigEcho {
    pub levels: usize,
    pub haze_map: HazeMapMode,
    pub bins: usize,
}

impl From<&FusionConfig> for ConfigEcho {
    fn from(cfg: &FusionConfig) -> Self {
        Self {
            levels: cfg.n_levels,
            haze_map: cfg.haze_map_mode,
            bins: cfg.histogram_bins,
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ReportRecord {
    pub label: String,
    pub config: ConfigEcho,
    /// `None` when the entry failed.
    pub metrics: Option<MetricsReport>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub error: Option<String>,
    pub ms: u64,
}

impl ReportRecord {
    pub fn is_success(&self) -> bool {
        self.error.is_none()
    }
}

fn luma_plane(img: &RgbImage) -> hazefuse::Plane {
    rgb_to_ycbcr(img).y().clone()
}

/// Dehazes one pair, writes the PNG and scores the result.
///
/// Metrics compare the luma of the input with the luma of the output as
/// written, i.e. after quantization to `depth`.
pub fn run_single(entry: &ManifestEntry, cfg: &FusionConfig, depth: BitDepth) -> Result<ReportRecord> {
    let started = Instant::now();
    let label = entry.label();
    let core = |context: String| move |source| CliError::Core { context, source };

    let pair = load_pair(&entry.rgb, &entry.nir).map_err(core(format!(
        "loading {} + {}",
        entry.rgb.display(),
        entry.nir.display()
    )))?;
    let out = dehaze(&pair, cfg).map_err(core(format!("dehazing {label}")))?;
    save_image(&out, &entry.out, depth).map_err(core(format!("writing {}", entry.out.display())))?;

    let written = RgbImage::new(
        requantize(out.r(), depth),
        requantize(out.g(), depth),
        requantize(out.b(), depth),
    )
    .map_err(core(format!("re-reading {label}")))?;
    let metrics = MetricsReport::compute(&luma_plane(pair.rgb()), &luma_plane(&written))
        .map_err(core(format!("scoring {label}")))?;

    Ok(ReportRecord {
        label,
        config: cfg.into(),
        metrics: Some(metrics),
        error: None,
        ms: started.elapsed().as_millis() as u64,
    })
}

/// Runs every manifest entry on at most `jobs` threads. Failures become
/// records with an `error` field. Records keep manifest order.
pub fn run_manifest(manifest: &RunManifest, depth: BitDepth, jobs: usize) -> Result<Vec<ReportRecord>> {
    let pool = rayon::ThreadPoolBuilder::new()
        .num_threads(jobs.max(1))
        .build()
        .map_err(|e| CliError::ThreadPool(e.to_string()))?;
    let cfg = manifest.config;
    Ok(pool.install(|| {
        manifest
            .entries
            .par_iter()
            .map(|entry| {
                let started = Instant::now();
                run_single(entry, &cfg, depth).unwrap_or_else(|err| ReportRecord {
                    label: entry.label(),
                    config: (&cfg).into(),
                    metrics: None,
                    error: Some(err.to_string()),
                    ms: started.elapsed().as_millis() as u64,
                })
            })
            .collect()
    }))
}

/// Loads a manifest, processes it and writes the JSON report.
pub fn run_batch(
    manifest_path: impl AsRef<Path>,
    report_path: impl AsRef<Path>,
    cfg: FusionConfig,
    depth: BitDepth,
    jobs: usize,
) -> Result<Vec<ReportRecord>> {
    cfg.validate().map_err(|source| CliError::Core {
        context: "configuration".into(),
        source,
    })?;
    let manifest = RunManifest::load(manifest_path, cfg)?;
    let records = run_manifest(&manifest, depth, jobs)?;
    write_report(report_path, &records)?;
    Ok(records)
}

pub fn write_report(path: impl AsRef<Path>, records: &[ReportRecord]) -> Result<()> {
    let path = path.as_ref();
    let mut text = serde_json::to_string_pretty(records).map_err(|source| CliError::Json {
        path: path.to_path_buf(),
        source,
    })?;
    text.push('\n');
    fs::write(path, text).map_err(|source| CliError::Io {
        path: path.to_path_buf(),
        source,
    })
}

pub fn read_report(path: impl AsRef<Path>) -> Result<Vec<ReportRecord>> {
    let path = path.as_ref();
    let text = fs::read_to_string(path).map_err(|source| CliError::Io {
        path: path.to_path_buf(),
        source,
    })?;
    serde_json::from_str(&text).map_err(|source| CliError::Json {
        path: path.to_path_buf(),
        source,
    })
}

/// Appends a record to a JSON report, creating it if needed.
pub fn append_report(path: impl AsRef<Path>, record: ReportRecord) -> Result<()> {
    let path = path.as_ref();
    let mut records = if path.exists() {
        read_report(path)?
    } else {
        Vec::new()
    };
    records.push(record);
    write_report(path, &records)
}

pub const TABLE_COLUMNS: [&str; 9] = [
    "label", "entropy", "std_dev", "ssim", "cc", "sf", "e", "sigma_sat", "r_bar",
];

/// CSV table of successful records, one row per label in label order, values
/// to 4 decimal places.
pub fn emit_table(records: &[ReportRecord]) -> String {
    let mut rows: Vec<(&str, &MetricsReport)> = records
        .iter()
        .filter_map(|r| r.metrics.as_ref().map(|m| (r.label.as_str(), m)))
        .collect();
    rows.sort_by(|a, b| a.0.cmp(b.0));

    let mut writer = csv::Writer::from_writer(Vec::new());
    writer.write_record(TABLE_COLUMNS).expect("in-memory write");
    for (label, m) in rows {
        let values = [m.entropy, m.std_dev, m.ssim, m.cc, m.sf, m.e, m.sigma_sat, m.r_bar];
        let mut record = vec![label.to_string()];
        record.extend(values.iter().map(|v| format!("{v:.4}")));
        writer.write_record(&record).expect("in-memory write");
    }
    String::from_utf8(writer.into_inner().expect("in-memory flush")).expect("utf-8 input")
}
