use gkm_crystal::binfinity::{check_realization_independence, IotaSequence, Realization};
use gkm_crystal::cartan::{CartanDatum, Quiver, Weight};
use gkm_crystal::geometry::{self, linalg::q, Matrix, QuiverRep};
use gkm_crystal::oracle::{graded_dim, rank, relation_matrix, weights_up_to_height, DEFAULT_HEIGHT_BOUND};
use proptest::prelude::*;

const CAP: usize = 100_000;

/// Symmetric matrices of rank 1..=3 with diagonal in {2, 0, -2} and
/// off-diagonal entries in {0, -1, -2}.
fn cartan() -> impl Strategy<Value = CartanDatum> {
    (1usize..=3).prop_flat_map(|n| {
        let diag = proptest::collection::vec(prop_oneof![Just(2i64), Just(0), Just(-2)], n);
        let off = proptest::collection::vec(0i64..=2, n * (n - 1) / 2);
        (diag, off).prop_map(move |(diag, off)| {
            let mut m = vec![vec![0; n]; n];
            let mut k = 0;
            for i in 0..n {
                m[i][i] = diag[i];
                for j in i + 1..n {
                    m[i][j] = -off[k];
                    m[j][i] = -off[k];
                    k += 1;
                }
            }
            CartanDatum::new(m).unwrap()
        })
    })
}

fn small_cartan() -> impl Strategy<Value = CartanDatum> {
    cartan().prop_filter("rank <= 2", |d| d.rank() <= 2)
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(48))]

    #[test]
    fn graph_prefix_is_stable(d in small_cartan(), shallow in 1usize..=3, extra in 1usize..=2) {
        let r = Realization::cyclic(d);
        let a = r.explore(shallow, CAP).unwrap();
        let b = r.explore(shallow + extra, CAP).unwrap();
        let n = a.elements.len();
        prop_assert_eq!(&b.elements[..n], &a.elements[..]);
        prop_assert_eq!(&b.layers[..n], &a.layers[..]);
        prop_assert!(b.layers[n..].iter().all(|&l| l > shallow));
        let inner: Vec<_> = b.edges.iter().copied().filter(|&(s, t, _)| s < n && t < n).collect();
        prop_assert_eq!(inner, a.edges);
    }

    #[test]
    fn crystal_matches_oracle(d in cartan()) {
        let r = Realization::cyclic(d.clone());
        let depth = if d.rank() == 3 { 3 } else { 4 };
        let counts = r.enumerate_to_depth(depth, CAP).unwrap().weight_counts();
        for alpha in weights_up_to_height(d.rank(), depth as u64) {
            let found = counts.get(&-&alpha).copied().unwrap_or(0) as u64;
            prop_assert_eq!(found, graded_dim(&d, &alpha, DEFAULT_HEIGHT_BOUND).unwrap(), "alpha {}", alpha);
        }
    }

    #[test]
    fn oracle_rank_ignores_row_and_column_order(
        d in small_cartan(),
        coords in proptest::collection::vec(0i64..=3, 2),
        seed in any::<u64>(),
    ) {
        let alpha: Vec<u64> = coords[..d.rank()].iter().map(|&c| c as u64).collect();
        prop_assume!(alpha.iter().sum::<u64>() <= 5);
        let (_, rows) = relation_matrix(&d, &alpha).unwrap();
        let base = rank(rows.clone()).unwrap();
        let mut shuffled = rows;
        let cols = shuffled.first().map_or(0, |r| r.len());
        // deterministic permutations derived from the seed
        let perm = |n: usize, salt: u64| {
            let mut idx: Vec<usize> = (0..n).collect();
            idx.sort_by_key(|&k| (k as u64 + 1).wrapping_mul(seed ^ salt).rotate_left(17));
            idx
        };
        let rp = perm(shuffled.len(), 0x9e37);
        let cp = perm(cols, 0x7f4a);
        shuffled = rp.iter().map(|&r| cp.iter().map(|&c| shuffled[r][c].clone()).collect()).collect();
        prop_assert_eq!(rank(shuffled).unwrap(), base);
    }

    #[test]
    fn kostant_a1_a2(a in 0i64..=5, b in 0i64..=5) {
        let a1 = CartanDatum::new(vec![vec![2]]).unwrap();
        prop_assert_eq!(graded_dim(&a1, &Weight::new(vec![a]), DEFAULT_HEIGHT_BOUND).unwrap(), 1);
        prop_assume!(a + b <= 7);
        let a2 = CartanDatum::new(vec![vec![2, -1], vec![-1, 2]]).unwrap();
        prop_assert_eq!(graded_dim(&a2, &Weight::new(vec![a, b]), DEFAULT_HEIGHT_BOUND).unwrap() as i64, a.min(b) + 1);
    }

    #[test]
    fn realization_does_not_depend_on_iota(
        d in small_cartan(),
        extra in proptest::collection::vec(0usize..2, 0..3),
    ) {
        let n = d.rank();
        // a period containing every index, in a scrambled order
        let mut period: Vec<usize> = (0..n).rev().collect();
        period.extend(extra.into_iter().map(|k| k % n));
        let cyclic = Realization::cyclic(d.clone());
        let other = Realization::new(d.clone(), IotaSequence::periodic(period, n).unwrap()).unwrap();
        prop_assert_eq!(check_realization_independence(&cyclic, &other, 3, CAP).unwrap(), Vec::<String>::new());
        // eps_i* read from (i, j, ...) and from (i, i, j, ...) agree
        let ex = cyclic.explore(3, CAP).unwrap();
        for i in 0..n {
            let once = cyclic.i_first(i);
            let twice = once.i_first(i);
            for b in &ex.elements {
                prop_assert_eq!(cyclic.eps_star_via(b, &once).unwrap(), cyclic.eps_star_via(b, &twice).unwrap());
                prop_assert_eq!(cyclic.eps_star(b, i).unwrap(), other.eps_star(&cyclic.transport(b, &other).unwrap(), i).unwrap());
            }
        }
    }
}

/// Quivers on one or two vertices with up to three `Omega` arrows.
fn quiver() -> impl Strategy<Value = Quiver> {
    (1usize..=2).prop_flat_map(|n| {
        proptest::collection::vec((0..n, 0..n), 0..=3).prop_map(move |arrows| Quiver::from_omega(n, &arrows).unwrap())
    })
}

/// Draws integers from a proptest-generated pool.
struct Pool(Vec<i64>, usize);

impl Pool {
    fn next(&mut self) -> i64 {
        let x = self.0[self.1 % self.0.len()];
        self.1 += 1;
        x
    }
}

fn random_rep(quiver: Quiver, dims: Vec<usize>, pool: &mut Pool) -> QuiverRep {
    let mats = quiver
        .arrows()
        .iter()
        .map(|a| {
            let (r, c) = (dims[a.target], dims[a.source]);
            Matrix::from_rows((0..r).map(|_| (0..c).map(|_| q(pool.next())).collect()).collect(), c)
        })
        .collect();
    QuiverRep::new(quiver, dims, mats).unwrap()
}

/// A representation built to satisfy the flag, moment-map and
/// regular-semisimple conditions: `Omega` arrows vanish, and along a random
/// ordering of the graded basis every other arrow is strictly triangular
/// while `Omega-bar` loops are triangular with distinct diagonal.
fn flagged_rep(quiver: Quiver, dims: Vec<usize>, order: Vec<(usize, usize)>, pool: &mut Pool) -> QuiverRep {
    let pos = |v: usize, k: usize| order.iter().position(|&x| x == (v, k)).unwrap();
    let mut rep = QuiverRep::zero(quiver.clone(), dims.clone()).unwrap();
    for (h, a) in quiver.arrows().iter().enumerate() {
        if a.orientation == gkm_crystal::cartan::Orientation::Omega {
            continue;
        }
        let (r, c) = (dims[a.target], dims[a.source]);
        let mut m = Matrix::zeros(r, c);
        for col in 0..c {
            for row in 0..r {
                if pos(a.target, row) < pos(a.source, col) {
                    m[(row, col)] = q(pool.next());
                }
            }
            if a.is_loop() {
                // distinct eigenvalues
                m[(col, col)] = q(3 * col as i64 + pool.next().rem_euclid(3));
            }
        }
        rep.set_mat(h, m).unwrap();
    }
    rep
}

fn dims_and_order(n: usize) -> impl Strategy<Value = (Vec<usize>, Vec<(usize, usize)>)> {
    proptest::collection::vec(0usize..=2, n).prop_flat_map(|dims| {
        let basis: Vec<(usize, usize)> = dims.iter().enumerate().flat_map(|(v, &d)| (0..d).map(move |k| (v, k))).collect();
        (Just(dims), Just(basis).prop_shuffle())
    })
}

fn quiver_with_dims() -> impl Strategy<Value = (Quiver, Vec<usize>, Vec<(usize, usize)>)> {
    quiver().prop_flat_map(|q| {
        let n = q.vertex_count();
        (Just(q), dims_and_order(n)).prop_map(|(q, (d, o))| (q, d, o))
    })
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(96))]

    #[test]
    fn star_is_an_involution_and_omega_is_alternating(
        (quiver, dims, _) in quiver_with_dims(),
        ints in proptest::collection::vec(-2i64..=2, 1..40),
    ) {
        let mut pool = Pool(ints, 0);
        let b = random_rep(quiver.clone(), dims.clone(), &mut pool);
        let b2 = random_rep(quiver, dims, &mut pool);
        prop_assert_eq!(&b.star().star(), &b);
        prop_assert_eq!(geometry::symplectic_form(&b, &b).unwrap(), q(0));
        let w = geometry::symplectic_form(&b, &b2).unwrap();
        prop_assert_eq!(geometry::symplectic_form(&b2, &b).unwrap(), -w);
        for i in 0..b.quiver().vertex_count() {
            // the kernel-formula tripwire must stay silent
            let star = geometry::eps_star_point(&b, i).unwrap();
            prop_assert_eq!(star, geometry::eps_point(&b.star(), i));
            prop_assert_eq!(geometry::eps_star_point(&b.star(), i).unwrap(), geometry::eps_point(&b, i));
        }
    }

    #[test]
    fn eps_closure_is_a_fixed_point(
        (quiver, dims, _) in quiver_with_dims(),
        ints in proptest::collection::vec(-2i64..=2, 1..40),
    ) {
        let b = random_rep(quiver, dims, &mut Pool(ints, 0));
        for i in 0..b.quiver().vertex_count() {
            let w = geometry::eps_closure(&b, i);
            for (h, a) in b.quiver().arrows().iter().enumerate() {
                if a.target != i {
                    continue;
                }
                if a.source == i {
                    prop_assert!(w.contains_subspace(&w.mapped(b.mat(h))));
                } else {
                    prop_assert!(w.contains_subspace(&geometry::Subspace::image(b.mat(h))));
                }
            }
        }
    }

    #[test]
    fn flagged_reps_have_positive_eps(
        (quiver, dims, order) in quiver_with_dims(),
        ints in proptest::collection::vec(-3i64..=3, 1..40),
    ) {
        let b = flagged_rep(quiver, dims, order, &mut Pool(ints, 0));
        prop_assert!(geometry::moment_map_check(&b));
        prop_assert!(geometry::regular_semisimple_check(&b));
        let w = geometry::flag_exists(&b, geometry::DEFAULT_FLAG_BOUND).unwrap();
        let w = w.expect("constructed with a flag");
        prop_assert!(w.is_valid_for(&b));
        if b.total_dim() > 0 {
            prop_assert!((0..b.quiver().vertex_count()).any(|i| geometry::eps_point(&b, i) > 0));
        }
    }

    #[test]
    fn flag_search_agrees_with_its_witness(
        (quiver, dims, _) in quiver_with_dims(),
        ints in proptest::collection::vec(-1i64..=1, 1..40),
    ) {
        // arbitrary reps: any witness found must satisfy the conditions
        let b = random_rep(quiver, dims, &mut Pool(ints, 0));
        if let Ok(Some(w)) = geometry::flag_exists(&b, geometry::DEFAULT_FLAG_BOUND) {
            prop_assert!(w.is_valid_for(&b));
        }
    }
}
