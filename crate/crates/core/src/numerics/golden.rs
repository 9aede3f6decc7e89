//! Golden-section search for a minimum of a unimodal function on a bracket.

/// Location and value of a minimum found by [`golden_section_min`].
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Minimum {
    pub x: f64,
    pub value: f64,
    pub iterations: usize,
}

const INV_PHI: f64 = 0.618_033_988_749_894_8;

/// Minimises `f` on `[lo, hi]`, stopping once the bracket is narrower than
/// `x_tol` or after `max_iter` iterations. Only one new evaluation is made per
/// iteration.
pub fn golden_section_min<F: Fn(f64) -> f64>(f: F, lo: f64, hi: f64, x_tol: f64, max_iter: usize) -> Minimum {
    let (mut a, mut b) = if lo <= hi { (lo, hi) } else { (hi, lo) };
    let mut c = b - INV_PHI * (b - a);
    let mut d = a + INV_PHI * (b - a);
    let mut fc = f(c);
    let mut fd = f(d);
    let mut iterations = 0;

    while (b - a).abs() > x_tol && iterations < max_iter {
        if fc < fd {
            b = d;
            d = c;
            fd = fc;
            c = b - INV_PHI * (b - a);
            fc = f(c);
        } else {
            a = c;
            c = d;
            fc = fd;
            d = a + INV_PHI * (b - a);
            fd = f(d);
        }
        iterations += 1;
    }

    let (x, value) = if fc < fd { (c, fc) } else { (d, fd) };
    Minimum { x, value, iterations }
}
