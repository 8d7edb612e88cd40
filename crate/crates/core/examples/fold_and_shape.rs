//! Fold sequences with the maximum-pairing folder and abstract their shapes.
//!
//! ```text
//! cargo run --example fold_and_shape -- GGGGAAAACCCCAUGGGAAACCCAU
//! ```

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use simbias::experiment::random_sequence;
use simbias::rnamap::{abstract_shape, fold_surrogate, max_pairs, parse_dotbracket, NucleotideSequence, DEFAULT_MIN_LOOP};

fn show(seq: &NucleotideSequence) -> simbias::Result<()> {
    let structure = fold_surrogate(seq, DEFAULT_MIN_LOOP);
    let shape = abstract_shape(&parse_dotbracket(structure.as_str())?);
    println!("{seq}");
    println!("{structure}  pairs={} shape={shape}", max_pairs(seq, DEFAULT_MIN_LOOP));
    println!();
    Ok(())
}

fn main() -> simbias::Result<()> {
    let args: Vec<String> = std::env::args().skip(1).collect();
    if !args.is_empty() {
        for a in &args {
            show(&a.parse()?)?;
        }
        return Ok(());
    }
    let mut rng = ChaCha8Rng::seed_from_u64(1);
    for _ in 0..5 {
        show(&random_sequence(&mut rng, 40))?;
    }

    // a structure written by hand: one stem holding two hairpins
    let db = "..((((((..((((....))))..((((....))))..))))))..";
    println!("{db}  shape={}", abstract_shape(&parse_dotbracket(db)?));
    Ok(())
}
