//! Closed-form areas of discs clipped by axis-aligned rectangles.
use num_traits::Float;


/// Antiderivative of `√(r² − t²)`.
fn semicircle_primitive(t: f64, r: f64) -> f64 {
    let h = (r * r - t * t).max(0.0).sqrt();
    0.5 * (t * h + r * r * (t / r).clamp(-1.0, 1.0).asin())
}

/// `∫_a^b min(√(r² − t²), c) dt` for `[a, b] ⊆ [−r, r]`, `c ≥ 0`.
pub fn clipped_chord_integral(a: f64, b: f64, r: f64, c: f64) -> f64 {
    if !(b > a) || r <= 0.0 {
        return 0.0;
    }
    if c >= r {
        return semicircle_primitive(b, r) - semicircle_primitive(a, r);
    }
    let s = (r * r - c * c).max(0.0).sqrt();
    let flat = (b.min(s) - a.max(-s)).max(0.0) * c;
    let left = {
        let (lo, hi) = (a, b.min(-s));
        if hi > lo {
            semicircle_primitive(hi, r) - semicircle_primitive(lo, r)
        } else {
            0.0
        }
    };
    let right = {
        let (lo, hi) = (a.max(s), b);
        if hi > lo {
            semicircle_primitive(hi, r) - semicircle_primitive(lo, r)
        } else {
            0.0
        }
    };
    flat + left + right
}

/// Area of the closed disc of radius `r` at `(cx, cy)` intersected with
/// `[x0, x1] × [y0, y1]`; the centre must lie inside the rectangle.
pub fn disk_rect_area(cx: f64, cy: f64, r: f64, x0: f64, x1: f64, y0: f64, y1: f64) -> f64 {
    if r <= 0.0 {
        return 0.0;
    }
    let a = (x0 - cx).max(-r);
    let b = (x1 - cx).min(r);
    let up = (y1 - cy).max(0.0);
    let down = (cy - y0).max(0.0);
    clipped_chord_integral(a, b, r, up) + clipped_chord_integral(a, b, r, down)
}

#[cfg(test)]
mod tests {
    use super::*;
    use core::f64::consts::PI;

    #[test]
    fn full_disc_and_quarter_disc() {
        assert!((disk_rect_area(0.5, 0.5, 0.3, 0.0, 1.0, 0.0, 1.0) - PI * 0.09).abs() < 1e-14);
        assert!((disk_rect_area(0.0, 0.0, 0.5, 0.0, 1.0, 0.0, 1.0) - PI * 0.25 / 4.0).abs() < 1e-14);
        assert!((disk_rect_area(0.5, 0.5, 1.0, 0.0, 1.0, 0.0, 1.0) - 1.0).abs() < 1e-14);
    }

    #[test]
    fn matches_grid_count() {
        let (cx, cy, r) = (0.2, 0.7, 0.45);
        let m = 2000;
        let mut inside = 0usize;
        for i in 0..m {
            for j in 0..m {
                let x = (i as f64 + 0.5) / m as f64;
                let y = (j as f64 + 0.5) / m as f64;
                if (x - cx).powi(2) + (y - cy).powi(2) <= r * r {
                    inside += 1;
                }
            }
        }
        let grid = inside as f64 / (m * m) as f64;
        assert!((disk_rect_area(cx, cy, r, 0.0, 1.0, 0.0, 1.0) - grid).abs() < 1e-4);
    }
}
