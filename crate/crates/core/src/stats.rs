//! Category and macro-category distributions per corpus or per age group,
//! with CSV export and stacked-bar SVG charts.
//!
//! Each sentence votes once, with its primary label.

use std::collections::BTreeMap;
use std::fmt;
use std::fmt::Write as _;
use std::path::Path;
use std::str::FromStr;

use rayon::prelude::*;
use serde::Serialize;
use thiserror::Error;

use crate::catalog::{CategoryId, MacroCategory};
use crate::io::write_atomic;
use crate::prep::LabeledRecord;

#[derive(Debug, Error)]
pub enum StatsError {
    #[error("negative age: {0} months")]
    NegativeAge(i64),
    #[error("record {record_id} of corpus {corpus} has no age metadata")]
    MissingAge { corpus: String, record_id: u64 },
    #[error("no reports to render")]
    Empty,
    #[error(transparent)]
    Io(#[from] std::io::Error),
    #[error(transparent)]
    Csv(#[from] csv::Error),
}

/// Age bins on months, half-open. `Older` collects 84 months and above; it
/// appears in tables but not in charts.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize)]
pub enum AgeGroup {
    Preverbal,
    Y1to2,
    Y3to4,
    Y5to6,
    Older,
}

impl AgeGroup {
    pub const ALL: [AgeGroup; 5] =
        [AgeGroup::Preverbal, AgeGroup::Y1to2, AgeGroup::Y3to4, AgeGroup::Y5to6, AgeGroup::Older];

    pub fn id(self) -> &'static str {
        match self {
            AgeGroup::Preverbal => "Preverbal",
            AgeGroup::Y1to2 => "Y1-2",
            AgeGroup::Y3to4 => "Y3-4",
            AgeGroup::Y5to6 => "Y5-6",
            AgeGroup::Older => "Older",
        }
    }

    /// Month range `[start, end)`; `Older` is open-ended.
    pub fn range_months(self) -> (u32, Option<u32>) {
        match self {
            AgeGroup::Preverbal => (0, Some(12)),
            AgeGroup::Y1to2 => (12, Some(36)),
            AgeGroup::Y3to4 => (36, Some(60)),
            AgeGroup::Y5to6 => (60, Some(84)),
            AgeGroup::Older => (84, None),
        }
    }
}

impl fmt::Display for AgeGroup {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.id())
    }
}

pub fn age_bin(months: i64) -> Result<AgeGroup, StatsError> {
    Ok(match months {
        m if m < 0 => return Err(StatsError::NegativeAge(m)),
        0..12 => AgeGroup::Preverbal,
        12..36 => AgeGroup::Y1to2,
        36..60 => AgeGroup::Y3to4,
        60..84 => AgeGroup::Y5to6,
        _ => AgeGroup::Older,
    })
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum GroupBy {
    Corpus,
    Age,
}

impl FromStr for GroupBy {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s.trim().to_ascii_lowercase().as_str() {
            "corpus" => Ok(GroupBy::Corpus),
            "age" => Ok(GroupBy::Age),
            other => Err(format!("unknown grouping {other:?}, expected corpus or age")),
        }
    }
}

/// Corpora sort alphabetically, age groups chronologically.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum GroupKey {
    Corpus(String),
    Age(AgeGroup),
}

impl fmt::Display for GroupKey {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            GroupKey::Corpus(c) => f.write_str(c),
            GroupKey::Age(a) => f.write_str(a.id()),
        }
    }
}

impl Serialize for GroupKey {
    fn serialize<S: serde::Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        s.collect_str(self)
    }
}

fn pct(count: usize, total: usize) -> f64 {
    if total == 0 {
        0.0
    } else {
        100.0 * count as f64 / total as f64
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct DistributionReport {
    pub group: GroupKey,
    /// Every category is present, zero counts included.
    pub counts: BTreeMap<CategoryId, usize>,
    pub total: usize,
    pub uncategorized: usize,
    pub percentages: BTreeMap<CategoryId, f64>,
    pub macro_percentages: BTreeMap<MacroCategory, f64>,
    pub uncategorized_percentage: f64,
}

impl DistributionReport {
    pub fn from_counts(group: GroupKey, counts: &BTreeMap<CategoryId, usize>, total: usize) -> Self {
        let counts: BTreeMap<CategoryId, usize> =
            CategoryId::ALL.iter().map(|&c| (c, counts.get(&c).copied().unwrap_or(0))).collect();
        let categorized: usize = counts.values().sum();
        assert!(categorized <= total, "category counts exceed group total");
        let percentages = counts.iter().map(|(&c, &n)| (c, pct(n, total))).collect();
        let macro_percentages = MacroCategory::ALL
            .iter()
            .map(|&m| {
                let n: usize = counts.iter().filter(|(c, _)| c.macro_category() == m).map(|(_, n)| n).sum();
                (m, pct(n, total))
            })
            .collect();
        let uncategorized = total - categorized;
        DistributionReport {
            group,
            counts,
            total,
            uncategorized,
            percentages,
            macro_percentages,
            uncategorized_percentage: pct(uncategorized, total),
        }
    }
}

#[derive(Debug, Clone, Default, PartialEq, Eq)]
struct Tally {
    counts: BTreeMap<CategoryId, usize>,
    total: usize,
}

impl Tally {
    fn merge(mut self, other: Tally) -> Tally {
        for (c, n) in other.counts {
            *self.counts.entry(c).or_default() += n;
        }
        self.total += other.total;
        self
    }
}

fn group_key(record: &LabeledRecord, by: GroupBy) -> Result<GroupKey, StatsError> {
    match by {
        GroupBy::Corpus => Ok(GroupKey::Corpus(record.corpus_id.clone())),
        GroupBy::Age => {
            let months = record.age_months.ok_or_else(|| StatsError::MissingAge {
                corpus: record.corpus_id.clone(),
                record_id: record.record_id,
            })?;
            Ok(GroupKey::Age(age_bin(months as i64)?))
        }
    }
}

type Tallies = BTreeMap<GroupKey, Tally>;

fn merge_tallies(mut a: Tallies, b: Tallies) -> Tallies {
    for (k, t) in b {
        let merged = a.remove(&k).unwrap_or_default().merge(t);
        a.insert(k, merged);
    }
    a
}

/// One report per group, in group order. Records without a primary label
/// count toward the total only.
pub fn distribution(records: &[LabeledRecord], group_by: GroupBy) -> Result<Vec<DistributionReport>, StatsError> {
    let tallies = records
        .par_iter()
        .try_fold(Tallies::new, |mut acc, r| {
            let tally = acc.entry(group_key(r, group_by)?).or_default();
            tally.total += 1;
            if let Some(c) = r.primary() {
                *tally.counts.entry(c).or_default() += 1;
            }
            Ok::<_, StatsError>(acc)
        })
        .try_reduce(Tallies::new, |a, b| Ok(merge_tallies(a, b)))?;
    Ok(tallies.into_iter().map(|(k, t)| DistributionReport::from_counts(k, &t.counts, t.total)).collect())
}

pub const UNCATEGORIZED: &str = "Uncategorized";

/// CSV text: `group,category,count,percentage`, fourteen rows per group.
pub fn csv_string(reports: &[DistributionReport]) -> Result<String, StatsError> {
    let mut w = csv::Writer::from_writer(Vec::new());
    w.write_record(["group", "category", "count", "percentage"])?;
    for r in reports {
        let group = r.group.to_string();
        for (c, n) in &r.counts {
            w.write_record([group.as_str(), c.name(), &n.to_string(), &format!("{:.2}", r.percentages[c])])?;
        }
        w.write_record([
            group.as_str(),
            UNCATEGORIZED,
            &r.uncategorized.to_string(),
            &format!("{:.2}", r.uncategorized_percentage),
        ])?;
    }
    let bytes = w.into_inner().map_err(|e| e.into_error())?;
    Ok(String::from_utf8(bytes).expect("csv output is utf-8"))
}

pub fn export_csv(reports: &[DistributionReport], out: &Path) -> Result<(), StatsError> {
    write_atomic(out, csv_string(reports)?.as_bytes())?;
    Ok(())
}

const SEGMENT_COLORS: [(&str, &str); 4] =
    [("Simple", "#4e79a7"), ("Interrogatives", "#f28e2b"), ("Complex", "#59a14f"), (UNCATEGORIZED, "#bab0ac")];

fn segments(r: &DistributionReport) -> [f64; 4] {
    [
        r.macro_percentages[&MacroCategory::Simple],
        r.macro_percentages[&MacroCategory::Interrogatives],
        r.macro_percentages[&MacroCategory::Complex],
        r.uncategorized_percentage,
    ]
}

fn xml_escape(s: &str) -> String {
    s.replace('&', "&amp;").replace('<', "&lt;").replace('>', "&gt;").replace('"', "&quot;")
}

/// Stacked bars of macro-category shares, one per report in input order.
/// The `Older` age group is left out.
pub fn chart_svg(reports: &[DistributionReport]) -> Result<String, StatsError> {
    let bars: Vec<&DistributionReport> = reports.iter().filter(|r| r.group != GroupKey::Age(AgeGroup::Older)).collect();
    if bars.is_empty() {
        return Err(StatsError::Empty);
    }
    let (left, top, plot_h, bar_w, gap) = (60.0, 30.0, 300.0, 48.0, 24.0);
    let plot_w = bars.len() as f64 * (bar_w + gap) + gap;
    let legend_x = left + plot_w + 20.0;
    let width = legend_x + 140.0;
    let height = top + plot_h + 60.0;
    let by_age = matches!(bars[0].group, GroupKey::Age(_));

    let mut s = String::new();
    let _ = writeln!(
        s,
        r#"<svg xmlns="http://www.w3.org/2000/svg" width="{width:.0}" height="{height:.0}" viewBox="0 0 {width:.0} {height:.0}" font-family="sans-serif" font-size="12">"#
    );
    let _ = writeln!(s, r#"<rect width="100%" height="100%" fill="white"/>"#);
    for tick in [0, 25, 50, 75, 100] {
        let y = top + plot_h - plot_h * tick as f64 / 100.0;
        let _ = writeln!(
            s,
            r##"<line x1="{left}" y1="{y:.2}" x2="{:.2}" y2="{y:.2}" stroke="#dddddd"/><text x="{:.0}" y="{:.2}" text-anchor="end">{tick}%</text>"##,
            left + plot_w,
            left - 6.0,
            y + 4.0
        );
    }
    for (i, r) in bars.iter().enumerate() {
        let x = left + gap + i as f64 * (bar_w + gap);
        let mut base = top + plot_h;
        for (share, (name, color)) in segments(r).iter().zip(SEGMENT_COLORS) {
            let h = plot_h * share / 100.0;
            if h <= 0.0 {
                continue;
            }
            base -= h;
            let _ = writeln!(
                s,
                r#"<rect x="{x:.2}" y="{base:.2}" width="{bar_w}" height="{h:.2}" fill="{color}"><title>{}: {name} {share:.2}%</title></rect>"#,
                xml_escape(&r.group.to_string())
            );
        }
        let _ = writeln!(
            s,
            r#"<text x="{:.2}" y="{:.2}" text-anchor="middle">{}</text>"#,
            x + bar_w / 2.0,
            top + plot_h + 18.0,
            xml_escape(&r.group.to_string())
        );
    }
    let _ = writeln!(
        s,
        r##"<line x1="{left}" y1="{top}" x2="{left}" y2="{:.2}" stroke="#333333"/><line x1="{left}" y1="{:.2}" x2="{:.2}" y2="{:.2}" stroke="#333333"/>"##,
        top + plot_h,
        top + plot_h,
        left + plot_w,
        top + plot_h
    );
    let _ = writeln!(
        s,
        r#"<text x="{:.2}" y="{:.2}" text-anchor="middle">{}</text>"#,
        left + plot_w / 2.0,
        top + plot_h + 42.0,
        if by_age { "Age group" } else { "Corpus" }
    );
    let _ = writeln!(
        s,
        r#"<text transform="translate(16 {:.2}) rotate(-90)" text-anchor="middle">Sentences (%)</text>"#,
        top + plot_h / 2.0
    );
    for (i, (name, color)) in SEGMENT_COLORS.iter().enumerate().rev() {
        let y = top + (3 - i) as f64 * 20.0;
        let _ = writeln!(
            s,
            r#"<rect x="{legend_x:.2}" y="{y:.2}" width="12" height="12" fill="{color}"/><text x="{:.2}" y="{:.2}">{name}</text>"#,
            legend_x + 18.0,
            y + 10.0
        );
    }
    s.push_str("</svg>\n");
    Ok(s)
}

pub fn render_stacked_chart(reports: &[DistributionReport], out: &Path) -> Result<(), StatsError> {
    write_atomic(out, chart_svg(reports)?.as_bytes())?;
    Ok(())
}
