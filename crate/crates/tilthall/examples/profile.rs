use std::time::Instant;
use tilthall::catalog::{build_catalog, CatalogCaps};
use tilthall::fixtures;
use tilthall::homology::HomCtx;
use tilthall::rep::SearchPolicy;

fn main() {
    for name in ["a2-f2", "a2-f3", "d2", "l3", "t2d2"] {
        let doc = fixtures::by_name(name).unwrap();
        let a = tilthall::algebra::BoundAlgebra::parse(&doc).unwrap();
        let ctx = HomCtx::new(a.clone(), SearchPolicy::default()).unwrap();
        let caps = CatalogCaps::for_field(a.field.q);
        let t0 = Instant::now();
        let cat = build_catalog(&ctx, 4, &caps, &[]).unwrap();
        println!(
            "{name}: D=4 {} classes, {} conflation shapes, {:?}",
            cat.classes.len(),
            cat.conflations.len(),
            t0.elapsed()
        );
    }
}
