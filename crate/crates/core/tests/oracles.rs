// Cross-checks against brute-force computations that share no code with the library.

mod common;

use num_bigint::BigInt;
use num_traits::ToPrimitive;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use toric_core::divisors::{is_cartier, local_class_group, InvariantDivisor};
use toric_core::fan::{single_cone_fan, Cone, LatticeVector};
use toric_core::lattice::{cokernel, IntMatrix};
use toric_core::singularities::{is_canonical, is_terminal, log_discrepancy, ToricPair};

fn gcd(a: i64, b: i64) -> i64 {
    if b == 0 {
        a.abs()
    } else {
        gcd(b, a % b)
    }
}

fn det(m: &[Vec<i64>]) -> i64 {
    if m.is_empty() {
        return 1;
    }
    let mut total = 0;
    for j in 0..m.len() {
        let minor: Vec<Vec<i64>> = m[1..]
            .iter()
            .map(|r| {
                r.iter()
                    .enumerate()
                    .filter(|&(k, _)| k != j)
                    .map(|(_, &x)| x)
                    .collect()
            })
            .collect();
        let sign = if j % 2 == 0 { 1 } else { -1 };
        total += sign * m[0][j] * det(&minor);
    }
    total
}

fn subsets(n: usize, k: usize) -> Vec<Vec<usize>> {
    if k == 0 {
        return vec![vec![]];
    }
    if n < k {
        return vec![];
    }
    let mut out = subsets(n - 1, k);
    for mut s in subsets(n - 1, k - 1) {
        s.push(n - 1);
        out.push(s);
    }
    out
}

/// Invariant factors as ratios of determinantal divisors (gcd of k x k minors).
fn invariant_factors_by_minors(a: &[Vec<i64>]) -> Vec<i64> {
    let (r, c) = (a.len(), a[0].len());
    let mut prev = 1;
    let mut out = Vec::new();
    for k in 1..=r.min(c) {
        let mut g = 0;
        for rows in subsets(r, k) {
            for cols in subsets(c, k) {
                let minor: Vec<Vec<i64>> = rows
                    .iter()
                    .map(|&i| cols.iter().map(|&j| a[i][j]).collect())
                    .collect();
                g = gcd(g, det(&minor));
            }
        }
        if g == 0 {
            break;
        }
        out.push(g / prev);
        prev = g;
    }
    out
}

fn big(m: &[Vec<i64>]) -> IntMatrix {
    let rows: Vec<&[i64]> = m.iter().map(Vec::as_slice).collect();
    IntMatrix::from_i64(&rows)
}

#[test]
fn cokernel_matches_determinantal_divisors() {
    let mut rng = ChaCha8Rng::seed_from_u64(11);
    for _ in 0..400 {
        let (r, c) = (rng.gen_range(1..=4), rng.gen_range(1..=4));
        let a: Vec<Vec<i64>> = (0..r)
            .map(|_| (0..c).map(|_| rng.gen_range(-5..=5)).collect())
            .collect();
        let factors = invariant_factors_by_minors(&a);
        let g = cokernel(&big(&a));
        assert_eq!(g.rank(), r - factors.len(), "{a:?}");
        let torsion: Vec<i64> = factors.into_iter().filter(|&d| d != 1).collect();
        let found: Vec<i64> = g.torsion().iter().map(|d| d.to_i64().unwrap()).collect();
        assert_eq!(found, torsion, "{a:?}");
    }
}

/// Lattice points `sum t_i v_i` with every `t_i` in `[0, 1)`.
fn parallelepiped_points(rays: &[Vec<i64>]) -> usize {
    let n = rays.len();
    let d = det(rays).abs();
    let bound: i64 = (0..n)
        .map(|j| rays.iter().map(|r| r[j].abs()).sum::<i64>())
        .max()
        .unwrap();
    let mut count = 0;
    let mut p = vec![-bound; n];
    loop {
        // Cramer: t_i = det(rays with row i replaced by p) / det(rays), row convention
        let inside = (0..n).all(|i| {
            let mut m = rays.to_vec();
            m[i] = p.clone();
            let num = det(&m) * det(rays).signum();
            (0..d).contains(&num)
        });
        if inside {
            count += 1;
        }
        let mut k = 0;
        while k < n {
            p[k] += 1;
            if p[k] <= bound {
                break;
            }
            p[k] = -bound;
            k += 1;
        }
        if k == n {
            return count;
        }
    }
}

#[test]
fn multiplicity_counts_parallelepiped_points() {
    let mut rng = ChaCha8Rng::seed_from_u64(12);
    let mut checked = 0;
    while checked < 150 {
        let n = rng.gen_range(2..=3);
        let rays: Vec<Vec<i64>> = (0..n)
            .map(|_| (0..n).map(|_| rng.gen_range(-3..=3)).collect())
            .collect();
        if det(&rays) == 0
            || rays
                .iter()
                .any(|r| r.iter().fold(0, |g, &x| gcd(g, x)) != 1)
        {
            continue;
        }
        let gens: Vec<LatticeVector> = rays.iter().map(|r| LatticeVector::from_i64(r)).collect();
        let cone = Cone::new(&gens).unwrap();
        let mult = cone.multiplicity().unwrap().to_i64().unwrap();
        assert_eq!(mult as usize, parallelepiped_points(&rays), "{rays:?}");
        assert_eq!(mult, det(&rays).abs());
        assert_eq!(cone.is_smooth(), mult == 1);
        checked += 1;
    }
}

#[test]
fn local_class_group_order_is_the_determinant() {
    let mut rng = ChaCha8Rng::seed_from_u64(13);
    let mut checked = 0;
    while checked < 100 {
        let rays: Vec<Vec<i64>> = (0..3)
            .map(|_| (0..3).map(|_| rng.gen_range(-3..=3)).collect())
            .collect();
        if det(&rays) == 0
            || rays
                .iter()
                .any(|r| r.iter().fold(0, |g, &x| gcd(g, x)) != 1)
        {
            continue;
        }
        let gens: Vec<LatticeVector> = rays.iter().map(|r| LatticeVector::from_i64(r)).collect();
        let f = single_cone_fan(&gens).unwrap();
        let g = local_class_group(&f, 0).unwrap();
        assert_eq!(g.rank(), 0);
        assert_eq!(
            g.order().unwrap(),
            BigInt::from(det(&rays).abs()),
            "{rays:?}"
        );
        checked += 1;
    }
}

#[test]
fn cartier_matches_character_search() {
    // plane fans with small rays: the local solution m lies in a small box
    let mut rng = ChaCha8Rng::seed_from_u64(14);
    let corpus = common::corpus(3);
    for f in corpus.iter().filter(|f| f.ambient_rank() == 2).take(300) {
        let coeffs: Vec<i64> = (0..f.num_rays()).map(|_| rng.gen_range(-3..=3)).collect();
        let d = InvariantDivisor::from_i64(&coeffs);
        let rays: Vec<[i64; 2]> = f
            .rays()
            .iter()
            .map(|r| {
                [
                    r.coords()[0].to_i64().unwrap(),
                    r.coords()[1].to_i64().unwrap(),
                ]
            })
            .collect();
        let brute = f.cones().iter().all(|cone| {
            (-20..=20i64).any(|x| {
                (-20..=20i64).any(|y| {
                    cone.iter()
                        .all(|&i| rays[i][0] * x + rays[i][1] * y == -coeffs[i])
                })
            })
        });
        assert_eq!(is_cartier(f, &d).unwrap(), brute, "{rays:?} {coeffs:?}");
    }
}

/// Whether `u` is a nonnegative combination of `gens`, by Caratheodory over
/// independent triples, pairs and singletons in three dimensions.
fn in_cone_3d(gens: &[Vec<i64>], u: &[i64]) -> bool {
    if u.iter().all(|&x| x == 0) {
        return true;
    }
    for g in gens {
        let cross = [
            g[1] * u[2] - g[2] * u[1],
            g[2] * u[0] - g[0] * u[2],
            g[0] * u[1] - g[1] * u[0],
        ];
        if cross == [0, 0, 0] && (0..3).map(|i| g[i] * u[i]).sum::<i64>() > 0 {
            return true;
        }
    }
    for s in subsets(gens.len(), 3) {
        let m: Vec<Vec<i64>> = s.iter().map(|&i| gens[i].clone()).collect();
        let d = det(&m);
        if d == 0 {
            continue;
        }
        let ok = (0..3).all(|i| {
            let mut r = m.clone();
            r[i] = u.to_vec();
            det(&r) * d.signum() >= 0
        });
        if ok {
            return true;
        }
    }
    for s in subsets(gens.len(), 2) {
        let (a, b) = (&gens[s[0]], &gens[s[1]]);
        // u = x a + y b with x, y >= 0, solved in a coordinate plane with nonzero minor
        for (p, q) in [(0, 1), (0, 2), (1, 2)] {
            let d = a[p] * b[q] - a[q] * b[p];
            if d == 0 {
                continue;
            }
            let x = u[p] * b[q] - u[q] * b[p];
            let y = a[p] * u[q] - a[q] * u[p];
            let fits = (0..3).all(|k| x * a[k] + y * b[k] == d * u[k]);
            if fits && x * d.signum() >= 0 && y * d.signum() >= 0 {
                return true;
            }
            break;
        }
    }
    false
}

#[test]
fn dual_cone_matches_box_search() {
    let mut rng = ChaCha8Rng::seed_from_u64(15);
    let mut checked = 0;
    while checked < 40 {
        let k = rng.gen_range(2..=5);
        let gens: Vec<Vec<i64>> = (0..k)
            .map(|_| (0..3).map(|_| rng.gen_range(-2..=2)).collect())
            .collect();
        let lv: Vec<LatticeVector> = gens.iter().map(|g| LatticeVector::from_i64(g)).collect();
        let Ok(cone) = Cone::new(&lv) else { continue };
        let dual: Vec<Vec<i64>> = cone
            .dual_description()
            .generators()
            .iter()
            .map(|g| g.iter().map(|x| x.to_i64().unwrap()).collect())
            .collect();
        for x in -3..=3i64 {
            for y in -3..=3i64 {
                for z in -3..=3i64 {
                    let u = [x, y, z];
                    let brute = gens.iter().all(|g| g[0] * x + g[1] * y + g[2] * z >= 0);
                    assert_eq!(
                        in_cone_3d(&dual, &u),
                        brute,
                        "{gens:?} dual {dual:?} at {u:?}"
                    );
                }
            }
        }
        checked += 1;
    }
}

#[test]
fn plane_log_discrepancy_by_cramer() {
    // 2D cone on u1, u2: phi(v) is the sum of the barycentric-like coordinates of v
    let mut rng = ChaCha8Rng::seed_from_u64(16);
    let mut checked = 0;
    while checked < 200 {
        let u: Vec<Vec<i64>> = (0..2)
            .map(|_| (0..2).map(|_| rng.gen_range(-4..=4)).collect())
            .collect();
        let d = det(&u);
        if d == 0 || u.iter().any(|r| gcd(r[0], r[1]) != 1) {
            continue;
        }
        let f = single_cone_fan(
            &u.iter()
                .map(|r| LatticeVector::from_i64(r))
                .collect::<Vec<_>>(),
        )
        .unwrap();
        let p = ToricPair::without_boundary(f);
        let (s, t) = (rng.gen_range(0..=4i64), rng.gen_range(0..=4i64));
        if s + t == 0 {
            continue;
        }
        let v = [s * u[0][0] + t * u[1][0], s * u[0][1] + t * u[1][1]];
        let phi = log_discrepancy(&p, &LatticeVector::from_i64(&v)).unwrap();
        assert_eq!(
            phi,
            num_rational::BigRational::from_integer(BigInt::from(s + t))
        );
        checked += 1;
    }
}

#[test]
fn cyclic_quotient_surfaces_classified() {
    // cone on (0, 1) and (n, -q): canonical exactly for q = n - 1, never terminal unless smooth
    for n in 2..=9i64 {
        for q in 1..n {
            if gcd(n, q) != 1 {
                continue;
            }
            let f = single_cone_fan(&[
                LatticeVector::from_i64(&[0, 1]),
                LatticeVector::from_i64(&[n, -q]),
            ])
            .unwrap();
            assert_eq!(is_canonical(&f).unwrap(), q == n - 1, "1/{n}(1,{q})");
            assert!(!is_terminal(&f).unwrap());
        }
    }
    let smooth = single_cone_fan(&[
        LatticeVector::from_i64(&[1, 0]),
        LatticeVector::from_i64(&[0, 1]),
    ])
    .unwrap();
    assert!(is_terminal(&smooth).unwrap());
}
