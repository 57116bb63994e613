macro_rules! example {
    ($module:ident, $file:literal) => {
        #[allow(dead_code)]
        mod $module {
            include!(concat!(env!("CARGO_MANIFEST_DIR"), "/examples/", $file));
        }

        #[test]
        fn $module() {
            $module::run_example().expect(concat!($file, " should run"));
        }
    };
}

example!(poset_queries, "poset_queries.rs");
example!(measurement_laws, "measurement_laws.rs");
example!(jigsaw_puzzle, "jigsaw_puzzle.rs");
example!(stern_gerlach_chain, "stern_gerlach_chain.rs");
example!(context_reset, "context_reset.rs");
example!(entropy_factorization, "entropy_factorization.rs");
example!(second_law, "second_law.rs");
