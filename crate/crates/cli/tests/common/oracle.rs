//! Straight-line reference for the level-by-level pyramid fusion.
//!
//! Written without the library's pyramid, map-pooling or fusion-rule code:
//! only the single-level transform and histogram matching are shared.

use hazefuse::{dwt2_level, histogram_match, idwt2_level, CoefficientSet, Plane};

fn pool(p: &Plane) -> Plane {
    let (w, h) = p.dims();
    let at = |x: usize, y: usize| p.get(x.min(w - 1), y.min(h - 1));
    Plane::from_fn(w.div_ceil(2), h.div_ceil(2), |x, y| {
        let s = at(2 * x, 2 * y) + at(2 * x + 1, 2 * y) + at(2 * x, 2 * y + 1) + at(2 * x + 1, 2 * y + 1);
        (s / 4.0).clamp(0.0, 1.0)
    })
}

fn blend(la: &Plane, na: &Plane, p: &Plane) -> Plane {
    Plane::from_fn(la.width(), la.height(), |x, y| {
        let w = p.get(x, y);
        w * na.get(x, y) + (1.0 - w) * la.get(x, y)
    })
}

fn choose_max(l: &Plane, n: &Plane) -> Plane {
    Plane::from_fn(l.width(), l.height(), |x, y| {
        let (a, b) = (l.get(x, y), n.get(x, y));
        if b.abs() > a.abs() {
            b
        } else {
            a
        }
    })
}

/// Two-level fusion written out step by step.
pub fn fuse_two_levels(luma: &Plane, nir: &Plane, haze: &Plane, bins: usize) -> Plane {
    let l1 = dwt2_level(luma).unwrap();
    let n1 = dwt2_level(nir).unwrap();
    let l2 = dwt2_level(&l1.approx).unwrap();
    let n2 = dwt2_level(&n1.approx).unwrap();
    let p1 = pool(haze);
    let p2 = pool(&p1);

    // Coarsest level: fuse and synthesize.
    let z2 = idwt2_level(
        &CoefficientSet {
            approx: blend(&l2.approx, &n2.approx, &p2),
            horizontal: choose_max(&l2.horizontal, &n2.horizontal),
            vertical: choose_max(&l2.vertical, &n2.vertical),
            diagonal: choose_max(&l2.diagonal, &n2.diagonal),
        },
        l1.approx.dims(),
    )
    .unwrap();

    // Finest level: match z to the fused approximation, then synthesize.
    let a1 = blend(&l1.approx, &n1.approx, &p1);
    let z2_matched = histogram_match(&z2, &a1, bins).unwrap();
    idwt2_level(
        &CoefficientSet {
            approx: z2_matched,
            horizontal: choose_max(&l1.horizontal, &n1.horizontal),
            vertical: choose_max(&l1.vertical, &n1.vertical),
            diagonal: choose_max(&l1.diagonal, &n1.diagonal),
        },
        luma.dims(),
    )
    .unwrap()
}
