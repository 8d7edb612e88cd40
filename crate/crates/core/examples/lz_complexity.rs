//! Lempel–Ziv complexity of binary strings and of bracket shapes.
//!
//! ```text
//! cargo run --example lz_complexity -- 0101010101 0110100110010110
//! ```

use simbias::lzcomplexity::{clz, shape_to_binary, BinaryString};

fn main() -> simbias::Result<()> {
    let mut inputs: Vec<String> = std::env::args().skip(1).collect();
    if inputs.is_empty() {
        inputs = ["0000000000000000", "0101010101010101", "0110100110010110", "0010111011000101"]
            .map(String::from)
            .to_vec();
    }
    println!("{:<20} {:>4} {:>4} {:>8}", "string", "Nw", "Nw^r", "C_LZ");
    for text in &inputs {
        let s: BinaryString = text.parse()?;
        let e = clz(&s);
        println!("{:<20} {:>4} {:>4} {:>8.3}", text, e.nw_forward, e.nw_reverse, e.raw_clz);
    }

    println!();
    println!("{:<14} {:<14} {:>8}", "shape", "bits", "C_LZ");
    for shape in ["[]", "[][]", "[[][]]", "[][][][]", "[[][]][[][]]"] {
        let b = shape_to_binary(shape)?;
        println!("{:<14} {:<14} {:>8.3}", shape, b.to_string(), clz(&b).raw_clz);
    }
    Ok(())
}
