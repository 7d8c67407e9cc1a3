use penny_core::audit::{
    audit, audit_deg5, check_theorem_tn2, classify_edge_type, classify_popularity, find_forbidden_patterns,
    find_kernels_and_apricots, EdgeType, Popularity, Status, Witness,
};
use penny_core::error::Error;
use penny_core::fixtures::{load_fixture, FIXTURE_NAMES};

#[test]
fn every_fixture_builds_as_a_plane_drawing() {
    for name in FIXTURE_NAMES {
        let f = load_fixture(name).unwrap();
        let g = f.graph().unwrap_or_else(|e| panic!("{name}: {e}"));
        assert!(g.euler_holds(), "{name}");
    }
    assert_eq!(load_fixture("nope").unwrap_err(), Error::UnknownFixture("nope".into()));
}

#[test]
fn apricot_has_one_kernel_with_labelled_ring() {
    let f = load_fixture("apricot").unwrap();
    assert_eq!(f.coords.len(), 14);
    let g = f.graph().unwrap();
    let (kernels, section) = find_kernels_and_apricots(&g);
    assert_eq!(kernels.len(), 1);
    let k = &kernels[0];
    assert_eq!(
        [k.l, k.u, k.r, k.d],
        [f.vertex("L"), f.vertex("U"), f.vertex("R"), f.vertex("D")]
    );
    let ring: Vec<usize> = ["L1", "L2", "U1", "U2", "U3", "R1", "R2", "D1", "D2", "D3"]
        .iter()
        .map(|n| f.vertex(n))
        .collect();
    assert_eq!(k.apricot_cycle, ring);
    assert!(section.values().all(|c| c.status == Status::Pass), "{section:#?}");
}

#[test]
fn u2_of_apricot_is_witnessed_by_u1() {
    let f = load_fixture("apricot_u2").unwrap();
    let g = f.graph().unwrap();
    let (section, witnesses) = check_theorem_tn2(&g);
    assert_eq!(section["tn2_witness"].status, Status::Pass);
    let w = witnesses.iter().find(|w| w.vertex == f.vertex("U2")).unwrap();
    assert_eq!(w.witness, f.vertex("U1"));
    assert_eq!(w.via, "apricot");
}

#[test]
fn mobius_loop_closes_and_broken_one_is_caught() {
    let g = load_fixture("mobius_loop").unwrap().graph().unwrap();
    assert_eq!(g.n(), 12);
    let s = audit_deg5(&g);
    assert_eq!(s["mobius_loop"].status, Status::Pass);
    assert_eq!(s["mobius_loop"].checked, 1);

    let g = load_fixture("mobius_broken").unwrap().graph().unwrap();
    let s = audit_deg5(&g);
    let c = &s["mobius_loop"];
    assert_eq!(c.status, Status::Violation);
    assert!(c.witnesses.iter().all(|w| w.reproduces(&g)));
}

#[test]
fn edge_type_fixtures() {
    for (name, want) in [("type1", EdgeType::TypeI), ("type2", EdgeType::TypeII), ("type3", EdgeType::TypeIII)] {
        let f = load_fixture(name).unwrap();
        let g = f.graph().unwrap();
        let (a, b) = (f.vertex("A"), f.vertex("B"));
        assert_eq!(g.degree(a), 4, "{name}");
        assert_eq!(classify_popularity(&g, b), Popularity::Popular, "{name}");
        assert_eq!(classify_edge_type(&g, a, b).unwrap(), want, "{name}");
    }
    // C3 and C5 flank A in the Type III triple; both are unpopular
    let g = load_fixture("type3").unwrap().graph().unwrap();
    let (s, _) = check_theorem_tn2(&g);
    assert_eq!(s["type_iii_unpopular"].status, Status::Pass);
    assert_eq!(s["type_iii_unpopular"].checked, 1);
}

#[test]
fn kifli_precondition_detected_once() {
    let f = load_fixture("kifli").unwrap();
    let g = f.graph().unwrap();
    let occ = find_forbidden_patterns(&g);
    assert_eq!(occ.len(), 1, "{occ:?}");
    assert_eq!(occ[0].pattern, "kifli");
    match occ[0].witness {
        Witness::Kifli { a, b1, b2 } => {
            assert_eq!(a, f.vertex("A"));
            let mut got = [b1, b2];
            got.sort();
            assert_eq!(got, [f.vertex("B1"), f.vertex("B2")]);
        }
        ref w => panic!("{w:?}"),
    }
    assert!(occ[0].witness.reproduces(&g));

    let g = load_fixture("kifli_shared").unwrap().graph().unwrap();
    assert!(find_forbidden_patterns(&g).is_empty());
}

#[test]
fn clover_precondition_detected_once() {
    let f = load_fixture("clover").unwrap();
    let g = f.graph().unwrap();
    let a = f.vertex("A");
    for b in ["B1", "B2", "B3", "B4"] {
        assert_eq!(classify_edge_type(&g, a, f.vertex(b)).unwrap(), EdgeType::TypeII, "{b}");
    }
    let occ = find_forbidden_patterns(&g);
    assert_eq!(occ.len(), 1, "{occ:?}");
    assert_eq!(occ[0].pattern, "clover");
    assert!(occ[0].witness.reproduces(&g));

    let g = load_fixture("clover_shared").unwrap().graph().unwrap();
    assert!(find_forbidden_patterns(&g).is_empty());
}

#[test]
fn overlapping_kernels_violate_disjointness() {
    let f = load_fixture("overlapping_kernels").unwrap();
    let g = f.graph().unwrap();
    let (kernels, s) = find_kernels_and_apricots(&g);
    assert_eq!(kernels.len(), 2);
    let c = &s["kernel_disjoint"];
    assert_eq!(c.status, Status::Violation);
    assert!(matches!(c.witnesses[0], Witness::KernelsOverlap { shared, .. } if shared == f.vertex("R")));
    assert!(c.witnesses[0].reproduces(&g));
}

#[test]
fn adjacent_fives_without_common_neighbour() {
    let f = load_fixture("deg5_no_common").unwrap();
    let g = f.graph().unwrap();
    let s = audit_deg5(&g);
    let c = &s["deg5_common_neighbor"];
    assert_eq!(
        c.witnesses,
        vec![Witness::NoCommonNeighbor { u: f.vertex("U"), v: f.vertex("V") }]
    );
    assert!(c.witnesses[0].reproduces(&g));

    let g = load_fixture("deg5_common").unwrap().graph().unwrap();
    assert_eq!(audit_deg5(&g)["deg5_common_neighbor"].status, Status::Pass);
}

#[test]
fn declared_audit_skips_metric_checks() {
    let g = load_fixture("apricot").unwrap().graph().unwrap();
    let r = audit(&g);
    assert!(!r.hypotheses_met);
    assert_eq!(r.checks["path_hull"].status, Status::Skipped);
    for c in r.checks.values() {
        for w in &c.witnesses {
            assert!(w.reproduces(&g), "{w:?}");
        }
    }
}
