//! Criterion benches over the hot paths. Run with the default features for
//! the rayon build and with `--no-default-features` for the sequential
//! fallback; criterion baselines make the comparison:
//!
//! ```sh
//! cargo bench -p framemark-core --no-default-features -- --save-baseline seq
//! cargo bench -p framemark-core -- --baseline seq
//! ```

use std::hint::black_box;

use criterion::{criterion_group, criterion_main, Criterion};

use framemark_core::attacks::{self, AttackChain};
use framemark_core::dtcwt;
use framemark_core::svd;
use framemark_core::video_io::{synth_video, Pattern};
use framemark_core::watermark::{self, Bit, EmbedParams};

fn bench_dtcwt(c: &mut Criterion) {
    let v = synth_video(64, 64, 1, 30.0, 1, Pattern::TexturedNoise).unwrap();
    let plane = v.frames()[0].u_at_luma_res();
    c.bench_function("dtcwt_forward_64x64_d3", |b| {
        b.iter(|| dtcwt::forward(black_box(&plane), 3).unwrap())
    });
    let pyr = dtcwt::forward(&plane, 3).unwrap();
    c.bench_function("dtcwt_inverse_64x64_d3", |b| {
        b.iter(|| dtcwt::inverse(black_box(&pyr)).unwrap())
    });
}

fn bench_svd(c: &mut Criterion) {
    let v = synth_video(64, 64, 1, 30.0, 2, Pattern::TexturedNoise).unwrap();
    let pyr = dtcwt::forward(&v.frames()[0].u_at_luma_res(), 3).unwrap();
    let mag = dtcwt::subband_magnitude(&pyr, 3, 2).unwrap();
    c.bench_function("svd_leading_8x8", |b| {
        b.iter(|| svd::leading_singular_value(black_box(&mag)).unwrap())
    });
    c.bench_function("svd_decompose_8x8", |b| {
        b.iter(|| svd::decompose(black_box(&mag)).unwrap())
    });
}

fn bench_codec(c: &mut Criterion) {
    let params = EmbedParams::default();
    let v = synth_video(64, 64, 60, 30.0, 3, Pattern::TexturedNoise).unwrap();
    let bits = watermark::bits_from_seed(9, 6);
    let mut group = c.benchmark_group("codec");
    group.sample_size(10);
    group.bench_function("embed_sequence_60f", |b| {
        b.iter(|| watermark::embed_sequence(black_box(&v), &bits, &params, 1.0 / 6.0).unwrap())
    });
    let embedded = watermark::embed_sequence(&v, &bits, &params, 1.0 / 6.0).unwrap().video;
    group.bench_function("extract_sequence_60f", |b| {
        b.iter(|| watermark::extract_sequence(black_box(&embedded), &params, 1.0 / 6.0).unwrap())
    });
    group.bench_function("frame_embed_bit", |b| {
        b.iter(|| watermark::embed_bit(black_box(&v.frames()[0]), Bit::Plus, &params).unwrap())
    });
    group.finish();
}

fn bench_attacks(c: &mut Criterion) {
    let v = synth_video(64, 64, 60, 30.0, 4, Pattern::TexturedNoise).unwrap();
    let mut group = c.benchmark_group("attacks");
    group.sample_size(10);
    group.bench_function("rotate_crop_10deg_60f", |b| {
        b.iter(|| attacks::rotate_crop(black_box(&v), 10.0).unwrap())
    });
    group.bench_function("quantize_step8_60f", |b| {
        b.iter(|| attacks::quantize(black_box(&v), 8).unwrap())
    });
    let chain: AttackChain = "rotate_crop:angle=10+framerate:fps=15".parse().unwrap();
    group.bench_function("chain_rot10_fps15_60f", |b| {
        b.iter(|| chain.apply(black_box(&v)).unwrap())
    });
    group.finish();
}

criterion_group!(benches, bench_dtcwt, bench_svd, bench_codec, bench_attacks);
criterion_main!(benches);
