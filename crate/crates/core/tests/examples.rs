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

example!(preprocess_edge_list, "preprocess_edge_list.rs");
example!(local_indices, "local_indices.rs");
example!(global_similarity, "global_similarity.rs");
example!(baseline_registry, "baseline_registry.rs");
example!(boosted_trees, "boosted_trees.rs");
example!(cross_validation, "cross_validation.rs");
example!(experiment_grid, "experiment_grid.rs");
example!(arff_export, "arff_export.rs");
example!(dataset_cache, "dataset_cache.rs");
