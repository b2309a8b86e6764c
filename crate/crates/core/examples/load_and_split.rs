//! Load a CSV, split it 70/20/10 with class balance preserved, and
//! standardize with training-set statistics.

use evoselect::dataset::{load_csv_reader, stratified_split, DEFAULT_FRACTIONS};

const CSV: &str = "\
sepal_len,petal_len,species
5.1,1.4,setosa
4.9,1.4,setosa
4.7,1.3,setosa
4.6,1.5,setosa
5.0,1.4,setosa
7.0,4.7,versicolor
6.4,4.5,versicolor
6.9,4.9,versicolor
5.5,4.0,versicolor
6.5,4.6,versicolor
";

fn main() -> evoselect::Result<()> {
    let data = load_csv_reader(CSV.as_bytes(), "iris_pair", "species")?;
    println!(
        "{} rows, features {:?}, class counts {:?}",
        data.n_samples(),
        data.feature_names(),
        data.class_counts()
    );

    let split = stratified_split(&data, DEFAULT_FRACTIONS, 1)?;
    for (name, part) in [
        ("train", &split.train),
        ("val", &split.val),
        ("test", &split.test),
    ] {
        println!("{name:<5} {:?}", part.class_counts());
    }

    let split = split.standardized()?;
    let col: Vec<f64> = split.train.features().column(0).collect();
    let mean = col.iter().sum::<f64>() / col.len() as f64;
    println!("standardized train sepal_len mean {mean:.2e}");
    Ok(())
}
