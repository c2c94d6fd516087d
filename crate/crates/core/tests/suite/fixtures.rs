use landau_paraxial::fixtures::{load_fixture, FixtureTable, ProvenanceTag, REFERENCE_KV};
use landau_paraxial::gouy::unwrap_phase;
use landau_paraxial::modes::{
    eval_landau_radial, free_beam_geometry, gouy_law_free, landau_energy, paraxial_pz, q_factor,
    QuantumNumbers,
};
use landau_paraxial::special::{laguerre, mode_norm_constant};
use landau_paraxial::units::{make_context, ParticleSpec, SiConversion, Species, Spin};
use landau_paraxial::Error;

fn fx(name: &str) -> f64 {
    load_fixture(name).unwrap().value
}

fn close(got: f64, want: f64, rel: f64) {
    assert!(
        (got - want).abs() <= rel * want.abs().max(f64::MIN_POSITIVE),
        "{got} vs {want} (rel {rel})"
    );
}

#[test]
fn norm_constants() {
    close(mode_norm_constant(0, 0), fx("C_00"), 1e-15);
    close(mode_norm_constant(1, 2), fx("C_12"), 1e-15);
    close(mode_norm_constant(3, 5), fx("C_3_5"), 1e-14);
    close(mode_norm_constant(10, -10), fx("C_10_10"), 1e-14);
}

#[test]
fn laguerre_values() {
    close(laguerre(2, 0, 2.0).unwrap(), fx("laguerre_2_0_at_2"), 1e-15);
    close(laguerre(1, 2, 1.0).unwrap(), fx("laguerre_1_2_at_1"), 1e-15);
    close(
        laguerre(5, 3, 7.5).unwrap(),
        fx("laguerre_5_3_at_7p5"),
        1e-14,
    );
    close(
        laguerre(10, 5, 50.0).unwrap(),
        fx("laguerre_10_5_at_50"),
        1e-13,
    );
}

#[test]
fn integer_q_factors() {
    let q = q_factor(
        QuantumNumbers::new(0, 1),
        ParticleSpec::electron(Spin::DOWN),
    );
    assert_eq!(q as f64, fx("q_electron_0_1_minus"));
    let q = q_factor(QuantumNumbers::new(0, -1), ParticleSpec::positron(Spin::UP));
    assert_eq!(q as f64, fx("q_positron_0_m1_plus"));
}

#[test]
fn units_and_si_bridge() {
    let ctx = make_context(Species::Electron, -0.5, 0.01, 1.0).unwrap();
    close(ctx.w_m, fx("w_m_b0p01"), 1e-15);
    let si = SiConversion::CODATA_2018;
    close(si.critical_field_tesla(), fx("B_critical_tesla"), 1e-14);
    close(si.to_natural(1.0).unwrap(), fx("b_per_tesla"), 1e-14);
}

#[test]
fn energies_and_spacings() {
    let up = ParticleSpec::electron(Spin::UP);
    let down = ParticleSpec::electron(Spin::DOWN);
    close(
        landau_energy(QuantumNumbers::new(0, 0), up, 0.0, 0.01).unwrap(),
        fx("E_n0_l0_plus_b0p01"),
        1e-15,
    );
    close(
        landau_energy(QuantumNumbers::new(2, 1), down, 0.1, 0.01).unwrap(),
        fx("E_n2_l1_minus_pz0p1_b0p01"),
        1e-15,
    );
    let e = |n| landau_energy(QuantumNumbers::new(n, 0), down, 0.0, 0.01).unwrap();
    close(e(1) - e(0), fx("spacing_1_b0p01"), 1e-13);
    close(e(2) - e(1), fx("spacing_2_b0p01"), 1e-13);
}

#[test]
fn paraxial_momentum() {
    let cmp = paraxial_pz(1.0, 0.02).unwrap();
    close(cmp.exact, fx("pz_exact_k1_lam0p02"), 1e-15);
    close(cmp.rel_gap, fx("pz_rel_gap_k1_lam0p02"), 1e-10);
}

#[test]
fn mode_profiles_and_free_geometry() {
    close(
        eval_landau_radial(QuantumNumbers::new(0, 0), 20.0, 0.0),
        fx("landau_axis_n0_l0_wm20"),
        1e-15,
    );
    close(
        free_beam_geometry(20.0, 1.0, 400.0).w_z,
        fx("free_w_z400_w20"),
        1e-15,
    );
    let law = gouy_law_free(QuantumNumbers::new(0, 0), 20.0, 1.0);
    close(law.phase_at(400.0), fx("free_gouy_z400_zr200"), 1e-15);
    close(
        unwrap_phase(&[3.0, -3.0])[1],
        fx("unwrap_3_m3_second"),
        1e-15,
    );
}

#[test]
fn table_contract() {
    let table = FixtureTable::reference();
    assert_eq!(table.emit(), REFERENCE_KV);
    assert!(table.names().count() >= 20);
    for name in table.names() {
        let f = table.get(name).unwrap();
        assert!(!f.provenance.is_empty(), "{name}");
    }
    assert_eq!(load_fixture("C_00").unwrap().tag, ProvenanceTag::Derived);
    assert!(matches!(load_fixture("missing"), Err(Error::Lookup(_))));
}
