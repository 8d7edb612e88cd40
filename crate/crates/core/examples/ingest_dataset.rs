//! Round-trip a dataset file: write generated records, read them back with
//! validation, and show what a malformed row reports.

use std::io::Cursor;
use std::path::Path;

use simbias::experiment::{generate_dataset, DatasetConfig};
use simbias::rnamap::{read_dataset, write_dataset};

fn main() -> simbias::Result<()> {
    let cfg = DatasetConfig {
        length: 30,
        n_samples: 5,
        test_size: 1,
        seed: 2,
        ..DatasetConfig::default()
    };
    let records = generate_dataset(&cfg)?;
    let mut buffer = Vec::new();
    write_dataset(&records, &mut buffer).expect("in-memory write");
    let text = String::from_utf8(buffer).expect("utf-8");
    print!("{text}");

    let back = read_dataset(Cursor::new(text.as_bytes()), Path::new("<memory>"))?;
    assert_eq!(back, records);
    println!("read back {} records", back.len());

    // the shape column must agree with the structure column
    let bad = "sequence,structure,shape\nGGGAAAACCC,(((....))),[][]\n";
    match read_dataset(Cursor::new(bad.as_bytes()), Path::new("bad.csv")) {
        Ok(_) => println!("unexpectedly accepted"),
        Err(e) => println!("{}: {e}", e.category()),
    }
    Ok(())
}
