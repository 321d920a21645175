//! Generates seeded terrain from a preset and summarises its features.
//!
//! ```text
//! cargo run --example terrain_generation -- slopes-mixed 7
//! ```

use terra::terrain::{check_compliance, generate_terrain, preset, terrain_stats};

fn main() {
    let mut args = std::env::args().skip(1);
    let name = args.next().unwrap_or_else(|| "slopes-mixed".into());
    let seed: u64 = args.next().map_or(0, |s| s.parse().expect("seed must be an integer"));

    let params = preset(&name).unwrap_or_else(|e| panic!("{e}"));
    let profile = generate_terrain(&params, seed, -10.0, 150.0);
    println!("{name} seed {seed}: {} vertices, {} features", profile.vertices().len(), profile.features().len());

    for f in profile.features().iter().take(8) {
        println!("  {:>12} at x = {:7.2}  width {:.3}  magnitude {:+.3}", f.kind.name(), f.start_x, f.width, f.magnitude);
    }
    print!("{}", terrain_stats(&profile).to_csv().unwrap());

    let violations = check_compliance(&params, &profile);
    println!("violations: {}", violations.len());

    // same seed, same world
    assert_eq!(profile, generate_terrain(&params, seed, -10.0, 150.0));
}
