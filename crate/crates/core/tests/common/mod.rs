#![allow(dead_code)]

use std::f64::consts::PI;

use toric_core::fan::{
    p1_times_p1, projective_plane, sigma_n_fan, validate_fan, Fan, LatticeVector,
};

/// Primitive vectors of `Z^2` with both coordinates in `[-2, 2]`.
pub fn small_primitive_vectors() -> Vec<[i64; 2]> {
    let mut out = Vec::new();
    for x in -2..=2i64 {
        for y in -2..=2i64 {
            if (x, y) != (0, 0) && gcd(x, y) == 1 {
                out.push([x, y]);
            }
        }
    }
    out
}

fn gcd(a: i64, b: i64) -> i64 {
    if b == 0 {
        a.abs()
    } else {
        gcd(b, a % b)
    }
}

/// The fan on a set of rays in the plane whose maximal cones join angularly
/// consecutive rays less than a half turn apart; rays in no such cone are kept as
/// one-dimensional cones.
pub fn plane_fan(rays: &[[i64; 2]]) -> Fan {
    let mut sorted: Vec<[i64; 2]> = rays.to_vec();
    sorted.sort_by(|a, b| angle(a).partial_cmp(&angle(b)).unwrap());
    let k = sorted.len();
    let mut cones: Vec<Vec<usize>> = Vec::new();
    let mut covered = vec![false; k];
    if k >= 2 {
        for i in 0..k {
            let j = (i + 1) % k;
            let (a, b) = (sorted[i], sorted[j]);
            let cross = a[0] * b[1] - a[1] * b[0];
            if cross > 0 {
                cones.push(vec![i, j]);
                covered[i] = true;
                covered[j] = true;
            }
        }
    }
    for (i, c) in covered.iter().enumerate() {
        if !c {
            cones.push(vec![i]);
        }
    }
    let rays = sorted.iter().map(|r| LatticeVector::from_i64(r)).collect();
    Fan::new(2, rays, cones).expect("well-formed plane fan")
}

fn angle(v: &[i64; 2]) -> f64 {
    let a = (v[1] as f64).atan2(v[0] as f64);
    if a < 0.0 {
        a + 2.0 * PI
    } else {
        a
    }
}

/// Every plane fan on at most `max_rays` rays drawn from the small primitive
/// vectors, plus a few named fans.
pub fn corpus(max_rays: usize) -> Vec<Fan> {
    let vs = small_primitive_vectors();
    let mut out = Vec::new();
    let mut chosen = Vec::new();
    subsets(&vs, 0, max_rays, &mut chosen, &mut out);
    out.push(projective_plane());
    out.push(p1_times_p1());
    out.push(sigma_n_fan(2).unwrap());
    out.push(sigma_n_fan(3).unwrap());
    out.retain(|f| validate_fan(f).is_valid());
    out
}

fn subsets(
    vs: &[[i64; 2]],
    start: usize,
    left: usize,
    chosen: &mut Vec<[i64; 2]>,
    out: &mut Vec<Fan>,
) {
    if !chosen.is_empty() {
        out.push(plane_fan(chosen));
    }
    if left == 0 {
        return;
    }
    for i in start..vs.len() {
        chosen.push(vs[i]);
        subsets(vs, i + 1, left - 1, chosen, out);
        chosen.pop();
    }
}
