use serde::{Deserialize, Serialize};

use crate::aggregation::{EvaluationResult, Ranking};
use crate::sensitivity::SensitivityReport;

/// Machine-readable results. Numbers are written at full precision.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ResultsExport {
    #[serde(flatten)]
    pub evaluation: EvaluationResult,
    pub ranking: Ranking,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub sensitivity: Option<SensitivityReport>,
}

/// Pretty-printed JSON with a trailing newline. The CLI's `--json` output
/// and the HTTP evaluation endpoints both emit exactly this text.
pub fn results_json(
    evaluation: &EvaluationResult,
    ranking: &Ranking,
    sensitivity: Option<&SensitivityReport>,
) -> String {
    let export = ResultsExport {
        evaluation: evaluation.clone(),
        ranking: ranking.clone(),
        sensitivity: sensitivity.cloned(),
    };
    let mut text = serde_json::to_string_pretty(&export).expect("results always serialize");
    text.push('\n');
    text
}

/// One row per option in ranking order: name, display utility, rank, then
/// each attribute's contribution on the display scale (empty in
/// multiplicative mode). Values carry 6 fractional digits; lines end in LF.
pub fn export_csv(evaluation: &EvaluationResult, ranking: &Ranking) -> String {
    let mut writer = csv::WriterBuilder::new()
        .terminator(csv::Terminator::Any(b'\n'))
        .from_writer(Vec::new());
    let scale = evaluation.display_scale;

    let mut header = vec!["option".to_owned(), "utility".to_owned(), "rank".to_owned()];
    header.extend(evaluation.attributes.iter().map(|a| a.name.clone()));
    writer.write_record(&header).expect("in-memory write");

    for entry in &ranking.entries {
        let option = evaluation
            .option(&entry.name)
            .expect("ranking built from this evaluation");
        let mut row = vec![
            option.name.clone(),
            format!("{:.6}", option.display_utility),
            entry.rank.to_string(),
        ];
        match &option.contributions {
            Some(parts) => row.extend(
                parts
                    .iter()
                    .map(|c| format!("{:.6}", scale.display(c.contribution))),
            ),
            None => row.extend(evaluation.attributes.iter().map(|_| String::new())),
        }
        writer.write_record(&row).expect("in-memory write");
    }
    String::from_utf8(writer.into_inner().expect("in-memory flush")).expect("CSV of UTF-8 fields")
}
