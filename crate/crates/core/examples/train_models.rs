//! Train the two inner models directly and watch the loss fall.

use evoselect::dataset::{stratified_split, DEFAULT_FRACTIONS};
use evoselect::metrics::MetricReport;
use evoselect::models::{train_with_history, ModelSpec};
use evoselect::synth;

fn main() -> evoselect::Result<()> {
    let data = synth::generate(10, 5, 1000, 4)?;
    let split = stratified_split(&data, DEFAULT_FRACTIONS, 4)?.standardized()?;

    for spec in [ModelSpec::logistic(), ModelSpec::mlp()] {
        let run = train_with_history(&spec, &split.train, 7)?;
        let losses = &run.epoch_losses;
        let step = (losses.len() / 5).max(1);
        let shown: Vec<String> = losses
            .iter()
            .step_by(step)
            .map(|l| format!("{l:.4}"))
            .collect();
        let scores = run.model.predict_scores(&split.val)?;
        let report = MetricReport::from_scores(&scores, split.val.labels())?;
        println!(
            "{:<8} {} params  loss {}  val acc {:.3} auc {:.3}",
            spec.kind.as_str(),
            run.model.params.len(),
            shown.join(" > "),
            report.accuracy,
            report.roc_auc
        );
    }
    Ok(())
}
