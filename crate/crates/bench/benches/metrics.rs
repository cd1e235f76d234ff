use std::hint::black_box;

use criterion::{criterion_group, criterion_main, Criterion};

use timelike::{
    curve_length, funk_distance, funk_distance_variational, geodesic_between, hilbert_distance,
    projective_hilbert_distance, Chart, ConvexBody, GeodesicRay, Hyperplane, Point,
    TimelikeContext, Vector,
};
use timelike_bench::{direction_fan, plane};

fn point2(x: f64, y: f64) -> Point {
    Point::from_column_slice(&[x, y])
}

/// Hexagon circumscribed around the unit circle at (3, 0).
fn hexagon_body() -> ConvexBody {
    let chart = plane();
    let center = point2(3.0, 0.0);
    let faces = (0..6)
        .map(|k| {
            let theta = std::f64::consts::PI * (k as f64) / 3.0;
            let normal = Vector::from_column_slice(&[theta.cos(), theta.sin()]);
            let offset = normal.dot(&center) + 1.0;
            Hyperplane::new(chart, normal, offset).expect("hexagon face")
        })
        .collect();
    ConvexBody::polytope(chart, faces, Some(center)).expect("hexagon body")
}

fn hexagon_context() -> TimelikeContext {
    TimelikeContext::funk(hexagon_body()).expect("hexagon context")
}

fn disk_context() -> TimelikeContext {
    let body = ConvexBody::ball(plane(), point2(3.0, 0.0), 1.0).expect("disk body");
    TimelikeContext::funk(body).expect("disk context")
}

fn strip_context() -> TimelikeContext {
    let chart = plane();
    let past = ConvexBody::polytope(
        chart,
        vec![Hyperplane::new(chart, Vector::from_column_slice(&[1.0, 0.0]), -1.0).unwrap()],
        Some(point2(-2.0, 0.0)),
    )
    .expect("past body");
    let future = ConvexBody::polytope(
        chart,
        vec![Hyperplane::new(chart, Vector::from_column_slice(&[-1.0, 0.0]), -1.0).unwrap()],
        Some(point2(2.0, 0.0)),
    )
    .expect("future body");
    TimelikeContext::hilbert(past, future).expect("strip context")
}

fn projective_context() -> TimelikeContext {
    let chart = Chart::spherical(2).expect("sphere chart");
    let south = ConvexBody::ball(
        chart,
        Point::from_column_slice(&[-1.0, 0.0, 0.0]),
        std::f64::consts::FRAC_PI_4,
    )
    .expect("south cap");
    TimelikeContext::projective_desitter(south).expect("projective context")
}

fn bench_distances(c: &mut Criterion) {
    let hexagon = hexagon_context();
    let disk = disk_context();
    let strip = strip_context();
    let p = point2(0.0, 0.0);
    let q = point2(0.4, 0.1);
    c.bench_function("funk_hit_polytope", |b| {
        b.iter(|| funk_distance(black_box(&hexagon), black_box(&p), black_box(&q)).unwrap())
    });
    c.bench_function("funk_variational_polytope", |b| {
        b.iter(|| {
            funk_distance_variational(black_box(&hexagon), black_box(&p), black_box(&q)).unwrap()
        })
    });
    c.bench_function("funk_hit_ball", |b| {
        b.iter(|| funk_distance(black_box(&disk), black_box(&p), black_box(&q)).unwrap())
    });
    c.bench_function("hilbert_strip", |b| {
        b.iter(|| {
            hilbert_distance(
                black_box(&strip),
                black_box(&point2(-0.2, 0.0)),
                black_box(&point2(0.3, 0.1)),
            )
            .unwrap()
        })
    });
}

fn bench_projective(c: &mut Criterion) {
    let ctx = projective_context();
    let p = Point::from_column_slice(&[(-0.2f64).sin(), (-0.2f64).cos(), 0.0]);
    let q = Point::from_column_slice(&[0.2f64.sin(), 0.2f64.cos(), 0.0]);
    c.bench_function("projective_hilbert", |b| {
        b.iter(|| projective_hilbert_distance(black_box(&ctx), black_box(&p), black_box(&q)))
    });
}

fn bench_lengths(c: &mut Criterion) {
    let ctx = hexagon_context();
    let chart = plane();
    let p = point2(0.0, 0.0);
    let q = point2(0.4, 0.1);
    for samples in [64usize, 512] {
        let curve = geodesic_between(chart, &p, &q)
            .expect("geodesic")
            .with_samples_hint(samples);
        c.bench_function(&format!("curve_length_{samples}"), |b| {
            b.iter(|| curve_length(black_box(&ctx), black_box(&curve)).unwrap())
        });
    }
}

fn bench_ray_hits(c: &mut Criterion) {
    let chart = plane();
    let hexagon = hexagon_body();
    let disk = ConvexBody::ball(chart, point2(3.0, 0.0), 1.0).expect("disk body");
    let base = point2(0.0, 0.0);
    let rays: Vec<GeodesicRay> = direction_fan(360)
        .into_iter()
        .map(|dir| GeodesicRay::new(chart, base.clone(), dir).expect("fan ray"))
        .collect();
    c.bench_function("ray_fan_polytope_360", |b| {
        b.iter(|| {
            let mut hits = 0usize;
            for ray in &rays {
                if hexagon.ray_first_hit(black_box(ray)).unwrap().is_some() {
                    hits += 1;
                }
            }
            hits
        })
    });
    c.bench_function("ray_fan_ball_360", |b| {
        b.iter(|| {
            let mut hits = 0usize;
            for ray in &rays {
                if disk.ray_first_hit(black_box(ray)).unwrap().is_some() {
                    hits += 1;
                }
            }
            hits
        })
    });
}

criterion_group!(
    benches,
    bench_distances,
    bench_projective,
    bench_lengths,
    bench_ray_hits
);
criterion_main!(benches);
