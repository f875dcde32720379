use dirroute::network::{emit, generate_network, load_network, BoundingBox, GeneratorParams, NetworkError, ValidationIssue};
use proptest::prelude::*;

proptest! {
    #![proptest_config(ProptestConfig::with_cases(40))]

    #[test]
    fn emit_then_load_is_identity(seed in any::<u64>(), hubs in 2usize..40, k in 1usize..5) {
        let params = GeneratorParams { hub_count: hubs, k_nearest: k, terminal_count: 1 + (seed % 2) as usize, ..Default::default() };
        let net = generate_network(&params, seed).unwrap();
        let text = emit(&net);
        let back = load_network(&text).unwrap();
        prop_assert_eq!(&back, &net);
        prop_assert_eq!(emit(&back), text);
    }

    #[test]
    fn generated_arcs_come_in_symmetric_pairs(seed in any::<u64>()) {
        let net = generate_network(&GeneratorParams::default(), seed).unwrap();
        for a in net.arcs() {
            let back = net.arc(&a.to, &a.from).expect("reverse arc");
            prop_assert_eq!(back.travel_time, a.travel_time);
            prop_assert_eq!(back.distance, a.distance);
        }
        prop_assert_eq!(net.terminals().count(), 2);
        let bb = BoundingBox::default();
        for h in net.hubs() {
            prop_assert!(h.location.lat() >= bb.lat_min && h.location.lat() <= bb.lat_max);
        }
    }
}

#[test]
fn generator_is_deterministic() {
    let p = GeneratorParams::default();
    assert_eq!(emit(&generate_network(&p, 7).unwrap()), emit(&generate_network(&p, 7).unwrap()));
    assert_ne!(emit(&generate_network(&p, 7).unwrap()), emit(&generate_network(&p, 8).unwrap()));
}

#[test]
fn dangling_edge_is_named() {
    let doc = r#"{"hubs": [{"id": "A", "lat": 30, "lon": -84}, {"id": "B", "lat": 31, "lon": -84, "terminal": true}],
                  "edges": [{"from": "A", "to": "B", "travel_time_h": 1, "distance_mi": 50},
                            {"from": "A", "to": "Z", "travel_time_h": 1, "distance_mi": 50}]}"#;
    match load_network(doc) {
        Err(NetworkError::Validation(issues)) => {
            assert!(issues.iter().any(|i| matches!(i, ValidationIssue::DanglingEndpoint { missing, .. } if missing.as_str() == "Z")));
            let msg = NetworkError::Validation(issues).to_string();
            assert!(msg.contains("A->Z"), "{msg}");
        }
        other => panic!("{other:?}"),
    }
}

#[test]
fn malformed_documents_are_parse_errors() {
    assert!(matches!(load_network("{"), Err(NetworkError::Parse(_))));
    assert!(matches!(load_network(r#"{"hubs": [], "edges": [], "extra": 1}"#), Err(NetworkError::Parse(_))));
}
