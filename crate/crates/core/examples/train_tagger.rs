//! Retrain the shipped tagger model from the shipped training corpus and
//! report held-out accuracy.
//!
//! ```text
//! cargo run -p citance-core --example train_tagger
//! ```
//!
//! Writes `crates/core/data/tagger_model.json` in place. Training is
//! deterministic, so rerunning reproduces the committed model byte for byte.

use citance_core::tagger::{accuracy, parse_tagged_file, train};

const EPOCHS: usize = 8;
const SEED: u64 = 20;

fn main() {
    let train_set = parse_tagged_file(include_str!("../data/tagger_train.txt"));
    let eval_set = parse_tagged_file(include_str!("../data/tagger_eval.txt"));

    let tagger = train(&train_set, EPOCHS, SEED);
    let train_acc = accuracy(&tagger, &train_set);
    let eval_acc = accuracy(&tagger, &eval_set);
    println!(
        "sentences: {} train, {} eval",
        train_set.len(),
        eval_set.len()
    );
    println!("token accuracy: {train_acc:.4} train, {eval_acc:.4} eval");

    let out = concat!(env!("CARGO_MANIFEST_DIR"), "/data/tagger_model.json");
    std::fs::write(out, tagger.to_json()).expect("cannot write model file");
    println!("model written to {out}");
}
