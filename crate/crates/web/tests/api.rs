use ssflip_web::api::{decode_demo, graph_summary, success_sweep};

#[test]
fn graph_summary_reports_parameters_and_certifications() {
    let r = graph_summary(12, 9, 3, 4, 2).unwrap();
    assert_eq!(r["parameters"]["n"], 225);
    assert_eq!(r["adjacency"].as_array().unwrap().len(), 12);
    let sides = r["expansion"].as_array().unwrap();
    assert_eq!(sides.len(), 2);
    assert!(sides.iter().all(|s| s["certifications"][0]["size"].as_u64().unwrap() >= 1));
    assert!(graph_summary(12, 9, 3, 3, 2).is_err());
}

#[test]
fn decode_demo_steps_replay_to_the_final_state() {
    for ty in ["X", "Z"] {
        let r = decode_demo(12, 9, 3, 4, 2, 7, 3, ty).unwrap();
        let steps = r["steps"].as_array().unwrap();
        let mut before = r["syndrome"].as_array().unwrap().len() as u64;
        for s in steps {
            assert_eq!(s["weight_before"].as_u64().unwrap(), before);
            let after = s["syndrome"].as_array().unwrap().len() as u64;
            assert_eq!(s["weight_after"].as_u64().unwrap(), after);
            assert!(after < before);
            before = after;
        }
        if r["success"] == true {
            assert_eq!(before, 0);
        }
    }
    assert!(decode_demo(12, 9, 3, 4, 2, 7, 3, "Y").is_err());
    assert!(decode_demo(12, 9, 3, 4, 2, 7, 1000, "X").is_err());
}

#[test]
fn weight_one_sweep_is_perfect_on_a_twin_free_graph() {
    let r = success_sweep(12, 9, 3, 4, 2, 3, 10).unwrap();
    let per = r["per_weight"].as_array().unwrap();
    assert_eq!(per.len(), 6);
    for p in per.iter().filter(|p| p["weight"] == 1) {
        assert_eq!(p["correct_rate"], 1.0);
    }
}
