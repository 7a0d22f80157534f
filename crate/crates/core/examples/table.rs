//! Prints classification rows: `cargo run --release --example table -- [max] [min]`.

use diffcyc::enumerate::classify;

fn main() {
    let max: u32 = std::env::args()
        .nth(1)
        .and_then(|s| s.parse().ok())
        .unwrap_or(12);
    let min: u32 = std::env::args()
        .nth(2)
        .and_then(|s| s.parse().ok())
        .unwrap_or(5);
    for n in min..=max {
        let r = classify(n).unwrap();
        println!(
            "{} types={} mult={} nodes={} {}ms",
            r.table_row(),
            r.homology_type_count(),
            r.multiplier_class_count(),
            r.stats.nodes,
            r.elapsed_ms
        );
    }
}
