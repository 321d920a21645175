//! Drops a single box from 2 m and compares against the closed form.

use terra::physics2d::rigs;

fn main() {
    let y0 = 2.0;
    for t in [0.25, 0.5, 1.0] {
        let y = rigs::free_fall_height(y0, t);
        let exact = y0 - 0.5 * 9.8 * t * t;
        println!("t = {t:4.2} s  y = {y:+.9} m  exact {exact:+.9}  error {:.2e}", (y - exact).abs());
    }
}
