//! WebAssembly bindings for the browser demo.
//!
//! Each exported function takes plain numbers and returns a JSON string,
//! so the page needs no bundler or generated TypeScript types. The same
//! functions are available natively through [`api`] for testing.

use wasm_bindgen::prelude::*;

pub mod api {
    use rand::seq::index::sample;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;
    use serde_json::{json, Value};

    use ssflip::harness::{
        simulate, ErrorModel, GuaranteeRadius, SideSelection, SimulationSummary, TrialConfig,
    };
    use ssflip::{BipartiteGraph, CssCode, DecoderOptions, ErrorType, Gf2Vector, RowSpace, Side, SmallSetFlipDecoder};

    /// Largest subset size the demo certifies exhaustively.
    const DEMO_SUBSET_SIZE: usize = 4;
    /// Subset budget for the demo's certification.
    const DEMO_CEILING: u128 = 20_000_000;

    fn graph(n_a: usize, n_b: usize, da: usize, db: usize, seed: u64) -> Result<BipartiteGraph, String> {
        BipartiteGraph::generate_biregular(n_a, n_b, da, db, seed).map_err(|e| e.to_string())
    }

    fn error_type(name: &str) -> Result<ErrorType, String> {
        match name {
            "X" | "x" => Ok(ErrorType::X),
            "Z" | "z" => Ok(ErrorType::Z),
            other => Err(format!("unknown error type {other:?}")),
        }
    }

    /// Samples a graph, certifies its expansion on small subsets and
    /// reports the code parameters.
    pub fn graph_summary(n_a: usize, n_b: usize, da: usize, db: usize, seed: u64) -> Result<Value, String> {
        let g = graph(n_a, n_b, da, db, seed)?;
        let code = CssCode::hypergraph_product(g.clone());
        let mut sides = Vec::new();
        for side in [Side::Left, Side::Right] {
            let profile = g
                .expansion_profile(side, DEMO_SUBSET_SIZE, DEMO_CEILING)
                .map_err(|e| e.to_string())?;
            let certs: Vec<Value> = [0.5, 0.25, 1.0 / 6.0]
                .iter()
                .map(|&bound| {
                    let c = profile.certify_below(bound);
                    json!({ "delta_bound": bound, "size": c.size, "delta": c.delta })
                })
                .collect();
            sides.push(json!({
                "side": side,
                "min_neighbors": profile.min_neighbors,
                "certifications": certs,
            }));
        }
        let adjacency: Vec<&[usize]> = (0..g.n_a()).map(|a| g.a_neighbors(a)).collect();
        Ok(json!({
            "parameters": code.parameters(),
            "adjacency": adjacency,
            "expansion": sides,
        }))
    }

    /// Decodes one random error and returns every flip the decoder made.
    #[allow(clippy::too_many_arguments)]
    pub fn decode_demo(
        n_a: usize,
        n_b: usize,
        da: usize,
        db: usize,
        graph_seed: u64,
        error_seed: u64,
        weight: usize,
        ty: &str,
    ) -> Result<Value, String> {
        let ty = error_type(ty)?;
        let code = CssCode::hypergraph_product(graph(n_a, n_b, da, db, graph_seed)?);
        let n = code.n();
        if weight > n {
            return Err(format!("weight {weight} exceeds n = {n}"));
        }
        let mut rng = ChaCha8Rng::seed_from_u64(error_seed);
        let mut support = sample(&mut rng, n, weight).into_vec();
        support.sort_unstable();
        let e = Gf2Vector::from_support(n, &support).map_err(|e| e.to_string())?;
        let syndrome = code.syndrome(ty, &e).map_err(|e| e.to_string())?;
        let options = DecoderOptions {
            trace: true,
            ..DecoderOptions::default()
        };
        let mut decoder = SmallSetFlipDecoder::with_options(&code, ty, options).map_err(|e| e.to_string())?;
        let r = decoder.decode(&syndrome).map_err(|e| e.to_string())?;
        let mut residual = e.clone();
        residual ^= &r.correction;
        let correctly_decoded = (code.code_dimension() > 0 && r.success)
            .then(|| RowSpace::new(code.generators(ty)).contains(&residual).unwrap_or(false));
        let check_grid = match ty {
            ErrorType::X => [n_a, n_b],
            ErrorType::Z => [n_b, n_a],
        };
        let mut current = e.clone();
        let mut steps = Vec::new();
        for s in r.trace.as_deref().unwrap_or_default() {
            for &q in &s.flip {
                current.flip(q);
            }
            let after = code.syndrome(ty, &current).map_err(|e| e.to_string())?;
            steps.push(json!({
                "generator": s.generator,
                "flip": s.flip,
                "weight_before": s.weight_before,
                "weight_after": s.weight_after,
                "syndrome": after.support(),
            }));
        }
        Ok(json!({
            "n_a": n_a,
            "n_b": n_b,
            "n": n,
            "error_type": ty,
            "check_grid": check_grid,
            "error": support,
            "syndrome": syndrome.support(),
            "steps": steps,
            "success": r.success,
            "correctly_decoded": correctly_decoded,
            "residual": residual.support(),
        }))
    }

    /// Success rates of random errors of weight `1..=max_weight` on both
    /// error types.
    pub fn success_sweep(
        n_a: usize,
        n_b: usize,
        da: usize,
        db: usize,
        seed: u64,
        max_weight: usize,
        trials: usize,
    ) -> Result<Value, String> {
        let g = graph(n_a, n_b, da, db, seed)?;
        let radius = GuaranteeRadius::certify(&g, DEMO_SUBSET_SIZE, DEMO_CEILING).ok();
        let code = CssCode::hypergraph_product(g);
        let cfg = TrialConfig {
            model: ErrorModel::RandomSupport,
            min_weight: 1,
            max_weight: max_weight.min(code.n()),
            trials_per_weight: trials,
            master_seed: seed,
            side: SideSelection::Both,
            check_equivalence: true,
            timed: false,
        };
        let records = simulate(&code, &cfg, radius).map_err(|e| e.to_string())?;
        let summary = SimulationSummary::build(&code, &cfg, radius, &records);
        serde_json::to_value(summary).map_err(|e| e.to_string())
    }
}

fn to_js(r: Result<serde_json::Value, String>) -> Result<String, JsValue> {
    r.map(|v| v.to_string()).map_err(|e| JsValue::from_str(&e))
}

#[wasm_bindgen]
pub fn graph_summary(n_a: usize, n_b: usize, da: usize, db: usize, seed: u32) -> Result<String, JsValue> {
    to_js(api::graph_summary(n_a, n_b, da, db, seed.into()))
}

#[wasm_bindgen]
#[allow(clippy::too_many_arguments)]
pub fn decode_demo(
    n_a: usize,
    n_b: usize,
    da: usize,
    db: usize,
    graph_seed: u32,
    error_seed: u32,
    weight: usize,
    error_type: &str,
) -> Result<String, JsValue> {
    to_js(api::decode_demo(n_a, n_b, da, db, graph_seed.into(), error_seed.into(), weight, error_type))
}

#[wasm_bindgen]
pub fn success_sweep(
    n_a: usize,
    n_b: usize,
    da: usize,
    db: usize,
    seed: u32,
    max_weight: usize,
    trials: usize,
) -> Result<String, JsValue> {
    to_js(api::success_sweep(n_a, n_b, da, db, seed.into(), max_weight, trials))
}
