use dirwalk::compiler::{compile_evolution, CompileOptions, ExpansionChoice, Stage};
use dirwalk::fixtures;
use dirwalk::jones::{self, QuquartState};
use dirwalk::linalg::{complexify, phase_invariant_distance, CMatrix, ONE};
use dirwalk::spectral::{eigendecompose, DEFAULT_TOL};
use dirwalk::verify::{locate_fault, sample_times, verify_circuit, VERIFY_TOL};
use dirwalk::{CircuitIR, Execution};

fn compile_reference(h: &CMatrix) -> CircuitIR {
    let dec = fixtures::reference_decomposition(h).unwrap();
    let opts = CompileOptions {
        reference_decomposition: true,
        ..CompileOptions::default()
    };
    compile_evolution(&dec, &opts).unwrap()
}

#[test]
fn three_vertex_fixture_compiles_and_verifies() {
    let h = complexify(&fixtures::h3());
    let ir = compile_reference(&h);
    assert_eq!(
        ir.block_order(),
        vec!["D2", "U2", "block", "Lambda_t", "U1", "D1", "block"]
    );
    assert!((ir.total_scale - 7f64.sqrt()).abs() < 1e-12);
    let r = verify_circuit(&ir, &h, 32, Execution::Sequential).unwrap();
    assert!(r.passed, "{r:?}");
}

#[test]
fn four_vertex_fixture_compiles_and_verifies() {
    let h = complexify(&fixtures::h4());
    let ir = compile_reference(&h);
    assert_eq!(ir.phase_stage().unwrap().offset, 1.5);
    let r = verify_circuit(&ir, &h, 32, Execution::Sequential).unwrap();
    assert!(r.passed, "{r:?}");
}

#[test]
fn eigendecompose_path_verifies_for_both_fixtures() {
    for h in [fixtures::h3(), fixtures::h4()] {
        let h = complexify(&h);
        let dec = eigendecompose(&h, DEFAULT_TOL).unwrap();
        for expansion in [ExpansionChoice::Auto, ExpansionChoice::GenericPad] {
            let opts = CompileOptions {
                expansion,
                ..CompileOptions::default()
            };
            let ir = compile_evolution(&dec, &opts).unwrap();
            let r = verify_circuit(&ir, &h, 32, Execution::Parallel).unwrap();
            assert!(r.passed, "{r:?}");
        }
    }
}

#[test]
fn transfer_matrix_is_evolution_over_scale() {
    let h = complexify(&fixtures::h4());
    let ir = compile_reference(&h);
    let dec = fixtures::four_vertex_decomposition();
    for t in [0.0, 0.3, 2.0, 5.1] {
        let got = jones::transfer_matrix(&ir, t).unwrap();
        let want = dec.evolution_operator(t).unwrap() * ONE.scale(1.0 / ir.total_scale);
        assert!(phase_invariant_distance(&got, &want) < 1e-10);
    }
}

#[test]
fn three_vertex_output_matches_dense_evolution() {
    let h = complexify(&fixtures::h3());
    let ir = compile_reference(&h);
    let dec = fixtures::three_vertex_decomposition();
    let psi = QuquartState::uniform(&ir);
    let psi0 = dirwalk::spectral::uniform_state(3) * ONE.scale(1.0 / 3f64.sqrt());
    for t in sample_times(32) {
        let out = jones::simulate(&ir, &psi, t).unwrap();
        let want = CMatrix::from_column_slice(
            3,
            1,
            (dec.evolve_state(&psi0, t).unwrap() * ONE.scale(1.0 / ir.total_scale)).as_slice(),
        );
        let got = CMatrix::from_column_slice(3, 1, &out.amplitudes[..3]);
        assert!(phase_invariant_distance(&got, &want) < 1e-8);
        assert!(out.amplitudes[3].norm() == 0.0);
        // |ψ₃(t)| is constant
        let p3 = out.amplitudes[2].norm_sqr() * ir.total_scale.powi(2);
        assert!((p3 - 1.0 / 3.0).abs() < 1e-9);
    }
}

#[test]
fn sweep_reproduces_centrality() {
    let h = complexify(&fixtures::h3());
    let ir = compile_reference(&h);
    let grid = jones::time_grid(0.0, std::f64::consts::PI, 360).unwrap();
    let table = jones::sweep(&ir, &QuquartState::uniform(&ir), &grid, Execution::Parallel).unwrap();
    let c = table.centrality().unwrap();
    for (got, want) in c.scores.iter().zip([5.0 / 12.0, 5.0 / 12.0, 2.0 / 12.0]) {
        assert!((got - want).abs() < 1e-6, "{got}");
    }
    for row in &table.probabilities {
        assert!(row.iter().sum::<f64>() <= 1.0 + 1e-9);
        assert!((row[2] - table.probabilities[0][2]).abs() < 1e-12);
    }

    let h = complexify(&fixtures::h4());
    let ir = compile_reference(&h);
    let grid = jones::time_grid(0.0, std::f64::consts::TAU, 200).unwrap();
    let table = jones::sweep(
        &ir,
        &QuquartState::uniform(&ir),
        &grid,
        Execution::Sequential,
    )
    .unwrap();
    for row in &table.probabilities {
        assert!((row[0] - row[1]).abs() < 1e-9);
    }
}

#[test]
fn perturbed_angle_is_located() {
    let h = complexify(&fixtures::h3());
    let mut ir = compile_reference(&h);
    let index = ir
        .stages
        .iter()
        .position(|e| matches!(e.stage, Stage::BlockUnitary { .. }))
        .unwrap();
    if let Stage::BlockUnitary { paths } = &mut ir.stages[index].stage {
        paths[0].beta += 0.1;
    }
    let r = verify_circuit(&ir, &h, 32, Execution::Sequential).unwrap();
    assert!(!r.passed);
    assert!(r.max_error > VERIFY_TOL);
    let fault = r.fault.unwrap();
    assert_eq!(fault.stage, index + 1);
    assert_eq!(fault.kind, "block_unitary");
    assert_eq!(locate_fault(&compile_reference(&h), &h), None);
}

#[test]
fn empty_graph_compiles_to_identity_equivalent() {
    for n in [3, 4] {
        let h = CMatrix::zeros(n, n);
        let dec = eigendecompose(&h, DEFAULT_TOL).unwrap();
        let ir = compile_evolution(&dec, &CompileOptions::default()).unwrap();
        let r = verify_circuit(&ir, &h, 8, Execution::Sequential).unwrap();
        assert!(r.passed, "{r:?}");
        assert!(ir
            .stages
            .iter()
            .all(|e| matches!(e.stage, Stage::Phase(_) | Stage::Blocker { .. })));
    }
}

#[test]
fn compiled_ir_survives_json() {
    let h = complexify(&fixtures::h4());
    let ir = compile_reference(&h);
    let back = CircuitIR::from_json(&ir.to_json()).unwrap();
    assert_eq!(back, ir);
    assert!(
        verify_circuit(&back, &h, 32, Execution::Sequential)
            .unwrap()
            .passed
    );
    let _ = VERIFY_TOL;
}
