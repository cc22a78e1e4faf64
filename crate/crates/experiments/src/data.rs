//! Bundled iris measurements and synthetic fixtures.

use fwdlda::Dataset;
use ndarray::Array2;
use rand::Rng;
use rand_distr::StandardNormal;

const IRIS_CSV: &str = include_str!("../data/iris.csv");

pub const IRIS_FEATURES: [&str; 4] = ["sepal_length", "sepal_width", "petal_length", "petal_width"];

/// The 150 x 4 iris table and its species labels.
pub fn iris() -> (Array2<f64>, Vec<String>) {
    let mut reader = csv::Reader::from_reader(IRIS_CSV.as_bytes());
    let mut x = Array2::zeros((150, 4));
    let mut labels = Vec::with_capacity(150);
    for (i, record) in reader.records().enumerate() {
        let record = record.expect("bundled iris table is well formed");
        for c in 0..4 {
            x[[i, c]] = record[c].parse().expect("bundled iris table is numeric");
        }
        labels.push(record[4].to_string());
    }
    (x, labels)
}

pub fn iris_dataset() -> Dataset {
    let (x, labels) = iris();
    Dataset::new(x, &labels, IRIS_FEATURES.iter().map(|s| s.to_string()).collect()).expect("iris is valid")
}

/// `prefix` columns followed by `noise` standard-normal columns named `noise{k}`.
pub fn with_noise<R: Rng>(prefix: &Array2<f64>, prefix_names: &[String], labels: &[String], noise: usize, rng: &mut R) -> Dataset {
    let n = labels.len();
    let p = prefix.ncols();
    let mut x = Array2::zeros((n, p + noise));
    x.slice_mut(ndarray::s![.., ..p]).assign(prefix);
    for v in x.slice_mut(ndarray::s![.., p..]).iter_mut() {
        *v = rng.sample(StandardNormal);
    }
    let mut names = prefix_names.to_vec();
    names.extend((0..noise).map(|k| format!("noise{k}")));
    Dataset::new(x, labels, names).expect("noise design is valid")
}

/// `n` rows in `j` equiprobable classes with one 0/1 indicator column per class.
pub fn one_hot(n: usize, j: usize) -> Dataset {
    let codes: Vec<usize> = (0..n).map(|i| i % j).collect();
    let x = Array2::from_shape_fn((n, j), |(i, c)| if codes[i] == c { 1.0 } else { 0.0 });
    Dataset::from_codes(
        x,
        codes,
        (0..j).map(|c| format!("class{c}")).collect(),
        (0..j).map(|c| format!("dummy{c}")).collect(),
    )
    .expect("one-hot design is valid")
}

/// Three classes where `X2` is 0 on A and 1 on B and C (zero within-class
/// variance), and `X1` is uniform on (-3, 3) for A, (-3, -1) for B, (1, 3) for C.
pub fn masked_split<R: Rng>(per_class: usize, rng: &mut R) -> Dataset {
    let mut x = Array2::zeros((3 * per_class, 2));
    let mut labels = Vec::with_capacity(3 * per_class);
    for (k, (label, lo, hi, x2)) in [("A", -3.0, 3.0, 0.0), ("B", -3.0, -1.0, 1.0), ("C", 1.0, 3.0, 1.0)]
        .into_iter()
        .enumerate()
    {
        for i in 0..per_class {
            let r = k * per_class + i;
            x[[r, 0]] = rng.random_range(lo..hi);
            x[[r, 1]] = x2;
            labels.push(label);
        }
    }
    Dataset::new(x, &labels, vec!["X1".into(), "X2".into()]).expect("fixture is valid")
}

/// Two classes separated exactly by the first column, plus `noise` normal columns.
pub fn binary_separable<R: Rng>(n: usize, noise: usize, rng: &mut R) -> Dataset {
    let labels: Vec<String> = (0..n).map(|i| if i % 2 == 0 { "neg" } else { "pos" }.to_string()).collect();
    let indicator = Array2::from_shape_fn((n, 1), |(i, _)| (i % 2) as f64);
    with_noise(&indicator, &["flag".to_string()], &labels, noise, rng)
}

/// `n` rows in `j` balanced classes with `m` standard-normal features.
pub fn null_design<R: Rng>(n: usize, j: usize, m: usize, rng: &mut R) -> Dataset {
    let codes: Vec<usize> = (0..n).map(|i| i % j).collect();
    let x = Array2::from_shape_fn((n, m), |_| rng.sample(StandardNormal));
    Dataset::from_codes(
        x,
        codes,
        (0..j).map(|c| format!("class{c}")).collect(),
        (0..m).map(|c| format!("x{c}")).collect(),
    )
    .expect("null design is valid")
}
