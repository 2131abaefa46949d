use chromlab_core::asymptotics::binom::log2_biguint;
use chromlab_core::asymptotics::{alpha0, expected_ksets_floor, profile};
use chromlab_core::coupling::permute_labels;
use chromlab_core::graphcore::{
    chromatic_number_with, count_independent_ksets, edge_bit, edge_index, independence_number, is_proper_coloring,
    max_clique, sample_gnp_half, Graph, SolveBudget,
};
use chromlab_core::poisson::{tv_poisson, PoissonSpec};
use chromlab_core::real::precision_for_bits;
use num_bigint::BigUint;
use proptest::prelude::*;

fn graph(max_n: usize) -> impl Strategy<Value = Graph> {
    (1..=max_n).prop_flat_map(|n| {
        proptest::collection::vec(any::<bool>(), n * (n - 1) / 2).prop_map(move |bits| {
            let mut g = Graph::empty(n).unwrap();
            let mut i = 0;
            for u in 0..n {
                for v in u + 1..n {
                    if bits[i] {
                        g.add_edge(u, v);
                    }
                    i += 1;
                }
            }
            g
        })
    })
}

/// Independent sets of every size, by subset enumeration.
fn brute_counts(g: &Graph) -> Vec<u64> {
    let n = g.n();
    let mut out = vec![0u64; n + 1];
    for mask in 0u32..(1 << n) {
        let vs: Vec<usize> = (0..n).filter(|&v| mask >> v & 1 == 1).collect();
        if g.is_independent(&vs) {
            out[vs.len()] += 1;
        }
    }
    out
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn profile_invariants(n in 4u64..1_000_000_000_000_000) {
        let p = profile(n).unwrap();
        let nb = BigUint::from(n);
        prop_assert_eq!(p.a as f64, alpha0(n).unwrap().floor().to_f64());
        prop_assert!(p.a >= 1);
        let prec = precision_for_bits(nb.bits());
        prop_assert_eq!(p.log2_mu.div(&log2_biguint(&nb, prec), prec), p.x.clone());
        prop_assert_eq!(p.n_prime.clone(), &nb + &p.r * p.a);
        let mu = expected_ksets_floor(n, p.a).unwrap();
        prop_assert!(&p.r * &p.r <= mu);
        prop_assert!((&p.r + 1u32) * (&p.r + 1u32) > mu);
    }

    #[test]
    fn kset_counts_match_enumeration(g in graph(11)) {
        let want = brute_counts(&g);
        for k in 1..=g.n() {
            let rep = count_independent_ksets(&g, k, true, u64::MAX).unwrap();
            prop_assert_eq!(rep.count, want[k], "k = {}", k);
            let sets = rep.sets.unwrap();
            prop_assert!(sets.iter().all(|s| s.len() == k && g.is_independent(s)));
        }
    }

    #[test]
    fn chromatic_number_is_consistent(g in graph(11)) {
        let res = chromatic_number_with(&g, SolveBudget::unlimited());
        prop_assert!(res.is_exact());
        prop_assert!(is_proper_coloring(&g, &res.coloring));
        prop_assert_eq!(res.coloring.iter().max().map_or(0, |c| c + 1), res.upper);
        prop_assert!(max_clique(&g, u64::MAX).clique.len() <= res.upper);
        prop_assert!(res.upper * independence_number(&g) >= g.n());
    }

    #[test]
    fn relabelling_preserves_invariants(g in graph(10), seed in any::<u64>()) {
        let h = permute_labels(&g, seed);
        let mut dg: Vec<usize> = (0..g.n()).map(|v| g.degree(v)).collect();
        let mut dh: Vec<usize> = (0..h.n()).map(|v| h.degree(v)).collect();
        dg.sort_unstable();
        dh.sort_unstable();
        prop_assert_eq!(dg, dh);
        prop_assert_eq!(brute_counts(&g), brute_counts(&h));
        prop_assert_eq!(
            chromatic_number_with(&g, SolveBudget::unlimited()).upper,
            chromatic_number_with(&h, SolveBudget::unlimited()).upper
        );
    }

    #[test]
    fn serialisations_round_trip(g in graph(40)) {
        prop_assert_eq!(Graph::from_bytes(&g.to_bytes()).unwrap(), g.clone());
        let mut buf = Vec::new();
        g.write_dimacs(&mut buf).unwrap();
        prop_assert_eq!(Graph::read_dimacs(&buf[..]).unwrap(), g.clone());
        prop_assert_eq!(g.complement().complement(), g.clone());
        prop_assert!(g.check_invariants());
    }

    #[test]
    fn sampler_is_keyed_by_seed_and_stream(n in 2usize..90, seed in any::<u64>(), stream in any::<u64>()) {
        let g = sample_gnp_half(n, seed, stream).unwrap();
        prop_assert_eq!(&g, &sample_gnp_half(n, seed, stream).unwrap());
        for (u, v) in [(0, 1), (0, n - 1), (n / 2, n - 1)] {
            if u != v {
                prop_assert_eq!(g.has_edge(u, v), edge_bit(seed, stream, edge_index(n, u, v)));
            }
        }
    }

    #[test]
    fn poisson_pmf_is_normalised(lambda in 0.01f64..5000.0) {
        let spec = PoissonSpec::new(lambda).unwrap();
        let (total, err) = spec.mass(0, None);
        prop_assert!((total - 1.0).abs() <= 1e-9 + err);
    }

    #[test]
    fn poisson_tv_is_a_metric_value(l1 in 0.1f64..200.0, l2 in 0.1f64..200.0) {
        let a = tv_poisson(l1, l2).unwrap();
        let b = tv_poisson(l2, l1).unwrap();
        prop_assert!((a.value - b.value).abs() <= a.error + b.error + 1e-12);
        prop_assert!(a.lower() <= 1.0 && a.upper() >= 0.0);
        if l1 == l2 {
            prop_assert!(a.value.abs() <= a.error + 1e-12);
        }
    }
}
