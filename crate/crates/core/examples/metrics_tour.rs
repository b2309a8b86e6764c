//! The evaluation metrics on small hand-checkable inputs.

use evoselect::ga::Chromosome;
use evoselect::metrics::{accuracy, f1, jaccard, roc_auc, Metric, MetricReport};

fn main() -> evoselect::Result<()> {
    let labels = [1, 1, 0, 0, 1, 0];
    let scores = [0.9, 0.4, 0.4, 0.1, 0.7, 0.6];

    // one tied positive/negative pair counts half
    println!("roc_auc  {:.4}", roc_auc(&scores, &labels)?);

    let preds: Vec<u8> = scores.iter().map(|&s| u8::from(s >= 0.5)).collect();
    println!("preds    {preds:?}");
    println!("accuracy {:.4}", accuracy(&preds, &labels)?);
    println!("f1       {:.4}", f1(&preds, &labels)?);

    let report = MetricReport::from_scores(&scores, &labels)?;
    for m in [Metric::Accuracy, Metric::F1, Metric::RocAuc] {
        println!("report.{:<8} {:.4}", m.as_str(), report.get(m));
    }

    let a = Chromosome::from_bits(&[1, 1, 0, 1, 0]);
    let b = Chromosome::from_bits(&[0, 1, 1, 1, 0]);
    println!("jaccard({a}, {b}) = {:.4}", jaccard(&a, &b)?);
    Ok(())
}
