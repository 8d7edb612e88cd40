//! Multiclass GP classification of a toy problem, with and without an
//! informative prior mean.
//!
//! Three clusters in the plane; class 0 is far more common than the others.
//! With one training point per class the prior mean decides most of the
//! predictions far from the training data.

use faer::Mat;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use simbias::gpcore::{fit, one_hot, FitConfig};

const CENTERS: [[f64; 2]; 3] = [[0.0, 0.0], [3.0, 0.0], [0.0, 3.0]];
const WEIGHTS: [f64; 3] = [0.8, 0.1, 0.1];

fn draw(rng: &mut ChaCha8Rng) -> (Vec<f64>, usize) {
    let u: f64 = rng.gen();
    let class = if u < WEIGHTS[0] { 0 } else if u < WEIGHTS[0] + WEIGHTS[1] { 1 } else { 2 };
    let c = CENTERS[class];
    (vec![c[0] + rng.gen_range(-1.5..1.5), c[1] + rng.gen_range(-1.5..1.5)], class)
}

fn main() -> simbias::Result<()> {
    let mut rng = ChaCha8Rng::seed_from_u64(4);
    let train: Vec<(Vec<f64>, usize)> = (0..3)
        .map(|class| (CENTERS[class].to_vec(), class))
        .collect();
    let test: Vec<(Vec<f64>, usize)> = (0..2000).map(|_| draw(&mut rng)).collect();

    let x = Mat::from_fn(train.len(), 2, |i, j| train[i].0[j]);
    let labels: Vec<usize> = train.iter().map(|t| t.1).collect();
    let y = one_hot(&labels, 3)?;

    for (name, mean) in [("zero", vec![0.0; 3]), ("informative", WEIGHTS.to_vec())] {
        let model = fit(x.as_ref(), y.matrix().as_ref(), &mean, 1.0, &FitConfig::default())?;
        let mut correct = 0;
        for (point, class) in &test {
            if model.predict_class(point)? == *class {
                correct += 1;
            }
        }
        println!(
            "{name:<12} accuracy {:.3}  (l = {:.3}, lambda = {:.2e})",
            correct as f64 / test.len() as f64,
            model.length_scale(),
            model.noise()
        );
        print!("{}", model.summary().to_toml());
        println!();
    }
    Ok(())
}
