//! Report rendering and atomic output.
//!
//! Six UTF-8 CSV files with header rows and RFC-4180 quoting, plus an
//! optional JSON Lines citance dump. Files are staged in a temporary
//! directory and renamed into place, so a failed run leaves no partial
//! output behind. Absent ratios render as empty cells.

use std::fs;
use std::io::Write;
use std::path::{Path, PathBuf};

use thiserror::Error;

use crate::analytics::{
    CitingRatioPoint, CorrelationRow, SectionMarkerRow, TemporalPoint, VersionSummary,
};
use crate::citance::Citance;
use crate::lexicon::MarkerCategory;
use crate::verbs::{top_verbs, VerbProfile};

#[derive(Debug, Error)]
pub enum ReportError {
    #[error("cannot write report {0}: {1}")]
    Io(PathBuf, std::io::Error),
}

/// One top-verb row: (rank, all, method, non-method) lemmas.
pub type TopVerbRow = (usize, Option<String>, Option<String>, Option<String>);

/// Everything `analyze` writes.
#[derive(Debug, Clone)]
pub struct ReportBundle {
    pub versions: Vec<VersionSummary>,
    pub markers_by_section: Vec<SectionMarkerRow>,
    pub top_verbs: Vec<TopVerbRow>,
    pub correlations: Vec<CorrelationRow>,
    /// (metric, point) rows for every metric.
    pub temporal: Vec<(String, TemporalPoint)>,
    pub citing_ratio: Vec<CitingRatioPoint>,
}

/// Top-verb rank rows from the three global profiles.
pub fn top_verb_rows(
    all: &VerbProfile,
    method: &VerbProfile,
    non_method: &VerbProfile,
    k: usize,
) -> Vec<TopVerbRow> {
    let a = top_verbs(all, k);
    let m = top_verbs(method, k);
    let n = top_verbs(non_method, k);
    let rows = a.len().max(m.len()).max(n.len());
    (0..rows)
        .map(|i| {
            (
                i + 1,
                a.get(i).map(|(l, _)| l.clone()),
                m.get(i).map(|(l, _)| l.clone()),
                n.get(i).map(|(l, _)| l.clone()),
            )
        })
        .collect()
}

fn csv_field(s: &str) -> String {
    if s.contains(',') || s.contains('"') || s.contains('\n') || s.contains('\r') {
        format!("\"{}\"", s.replace('"', "\"\""))
    } else {
        s.to_string()
    }
}

fn csv_line(fields: &[String]) -> String {
    fields
        .iter()
        .map(|f| csv_field(f))
        .collect::<Vec<_>>()
        .join(",")
}

fn opt(v: Option<f64>) -> String {
    v.map(|x| x.to_string()).unwrap_or_default()
}

fn marker_columns() -> [MarkerCategory; 4] {
    // hedging gets its own column after these, mirroring the table layout
    [
        MarkerCategory::Attitude,
        MarkerCategory::Boosters,
        MarkerCategory::SelfMention,
        MarkerCategory::Engagement,
    ]
}

pub fn render_versions_csv(rows: &[VersionSummary]) -> String {
    let mut out = String::from(
        "version_id,citing_papers,citing_papers_with_method_citance_ratio,citances,\
         method_citances,method_citance_ratio,citances_per_paper,attitude_ratio,\
         boosters_ratio,self_mention_ratio,engagement_ratio,hedging_ratio,mean_readability\n",
    );
    for r in rows {
        let mut fields = vec![
            r.version_id.clone(),
            r.citing_papers.to_string(),
            opt(r.citing_papers_with_method_citance_ratio),
            r.citances.to_string(),
            r.method_citances.to_string(),
            opt(r.method_citance_ratio),
            opt(r.citances_per_paper),
        ];
        for cat in marker_columns() {
            fields.push(opt(r.marker_ratios.get(&cat).copied()));
        }
        fields.push(opt(r.hedging_ratio));
        fields.push(opt(r.mean_readability));
        out.push_str(&csv_line(&fields));
        out.push('\n');
    }
    out
}

pub fn render_markers_csv(rows: &[SectionMarkerRow]) -> String {
    let mut out = String::from(
        "version,section_kind,n_citances,attitude_ratio,boosters_ratio,self_mention_ratio,\
         engagement_ratio,hedging_ratio,mean_readability\n",
    );
    for r in rows {
        let mut fields = vec![
            r.version.clone(),
            r.section_kind.as_str().to_string(),
            r.n_citances.to_string(),
        ];
        for cat in marker_columns() {
            fields.push(r.marker_ratios[&cat].to_string());
        }
        fields.push(r.hedging_ratio.to_string());
        fields.push(opt(r.mean_readability));
        out.push_str(&csv_line(&fields));
        out.push('\n');
    }
    out
}

pub fn render_top_verbs_csv(rows: &[TopVerbRow]) -> String {
    let mut out = String::from("rank,all,method,non_method\n");
    for (rank, a, m, n) in rows {
        out.push_str(&csv_line(&[
            rank.to_string(),
            a.clone().unwrap_or_default(),
            m.clone().unwrap_or_default(),
            n.clone().unwrap_or_default(),
        ]));
        out.push('\n');
    }
    out
}

pub fn render_correlations_csv(rows: &[CorrelationRow]) -> String {
    let mut out = String::from("population_a,population_b,n,rho,status\n");
    for r in rows {
        out.push_str(&csv_line(&[
            r.population_a.clone(),
            r.population_b.clone(),
            r.n.to_string(),
            opt(r.rho),
            r.status.to_string(),
        ]));
        out.push('\n');
    }
    out
}

pub fn render_temporal_csv(rows: &[(String, TemporalPoint)]) -> String {
    let mut out =
        String::from("metric,version_id,object_history_year,n_citances,value,suppressed\n");
    for (metric, p) in rows {
        out.push_str(&csv_line(&[
            metric.clone(),
            p.version_id.clone(),
            p.object_history_year.to_string(),
            p.n_citances.to_string(),
            p.metric_value.to_string(),
            p.suppressed.to_string(),
        ]));
        out.push('\n');
    }
    out
}

pub fn render_citing_ratio_csv(rows: &[CitingRatioPoint]) -> String {
    let mut out = String::from("axis,version_id,year,citing_papers,total_papers,ratio\n");
    for r in rows {
        out.push_str(&csv_line(&[
            r.axis.to_string(),
            r.version_id.clone().unwrap_or_default(),
            r.year.to_string(),
            r.citing_papers.to_string(),
            r.total_papers.to_string(),
            r.ratio.to_string(),
        ]));
        out.push('\n');
    }
    out
}

/// Names of the six report files, in a fixed order.
pub const REPORT_FILES: [&str; 6] = [
    "versions.csv",
    "markers_by_section.csv",
    "top_verbs.csv",
    "correlations.csv",
    "temporal.csv",
    "citing_ratio.csv",
];

pub fn render_all(bundle: &ReportBundle) -> Vec<(&'static str, String)> {
    vec![
        ("versions.csv", render_versions_csv(&bundle.versions)),
        (
            "markers_by_section.csv",
            render_markers_csv(&bundle.markers_by_section),
        ),
        ("top_verbs.csv", render_top_verbs_csv(&bundle.top_verbs)),
        (
            "correlations.csv",
            render_correlations_csv(&bundle.correlations),
        ),
        ("temporal.csv", render_temporal_csv(&bundle.temporal)),
        (
            "citing_ratio.csv",
            render_citing_ratio_csv(&bundle.citing_ratio),
        ),
    ]
}

pub fn render_citances_jsonl(citances: &[Citance]) -> String {
    let mut out = String::new();
    for c in citances {
        out.push_str(&serde_json::to_string(c).expect("citance serialization cannot fail"));
        out.push('\n');
    }
    out
}

struct StageDir {
    path: PathBuf,
}

impl Drop for StageDir {
    fn drop(&mut self) {
        let _ = fs::remove_dir_all(&self.path);
    }
}

/// Write all reports (and optionally the citance dump) atomically: stage in a
/// temporary sibling directory, then rename each file into place.
pub fn write_reports(
    out_dir: &Path,
    bundle: &ReportBundle,
    citances_out: Option<(&Path, &[Citance])>,
) -> Result<(), ReportError> {
    let io_err = |p: &Path| {
        let p = p.to_path_buf();
        move |e: std::io::Error| ReportError::Io(p.clone(), e)
    };

    let parent = out_dir.parent().filter(|p| !p.as_os_str().is_empty());
    if let Some(parent) = parent {
        fs::create_dir_all(parent).map_err(io_err(parent))?;
    }
    let stage = StageDir {
        path: out_dir.with_extension(format!("stage.{}", std::process::id())),
    };
    fs::create_dir_all(&stage.path).map_err(io_err(&stage.path))?;

    let mut staged: Vec<(PathBuf, PathBuf)> = Vec::new();
    for (name, content) in render_all(bundle) {
        let tmp = stage.path.join(name);
        let mut f = fs::File::create(&tmp).map_err(io_err(&tmp))?;
        f.write_all(content.as_bytes()).map_err(io_err(&tmp))?;
        staged.push((tmp, out_dir.join(name)));
    }
    if let Some((path, citances)) = citances_out {
        let tmp = stage.path.join("citances.jsonl");
        let mut f = fs::File::create(&tmp).map_err(io_err(&tmp))?;
        f.write_all(render_citances_jsonl(citances).as_bytes())
            .map_err(io_err(&tmp))?;
        staged.push((tmp, path.to_path_buf()));
    }

    fs::create_dir_all(out_dir).map_err(io_err(out_dir))?;
    for (tmp, final_path) in staged {
        if let Some(parent) = final_path.parent().filter(|p| !p.as_os_str().is_empty()) {
            fs::create_dir_all(parent).map_err(io_err(parent))?;
        }
        fs::rename(&tmp, &final_path).map_err(io_err(&final_path))?;
    }
    Ok(())
}
