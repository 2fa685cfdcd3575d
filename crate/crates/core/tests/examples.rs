macro_rules! example {
    ($name:ident, $file:literal) => {
        mod $name {
            include!(concat!(env!("CARGO_MANIFEST_DIR"), "/examples/", $file));

            #[test]
            fn runs() {
                run_example().unwrap();
            }
        }
    };
}

example!(spherical_orbits, "spherical_orbits.rs");
example!(planewave_stability, "planewave_stability.rs");
example!(modulational_instability, "modulational_instability.rs");
example!(soliton_boost, "soliton_boost.rs");
example!(standing_waves, "standing_waves.rs");
example!(coercivity_probe, "coercivity_probe.rs");
example!(cli_manifest, "cli_manifest.rs");
