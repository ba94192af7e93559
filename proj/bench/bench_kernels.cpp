// Compares the serial reference kernels against the OpenMP-parallel ones on a
// synthetic workload and verifies that they agree bitwise.

#include <chrono>
#include <iostream>
#include <random>
#include <string>
#include <vector>

#ifdef _OPENMP
#include <omp.h>
#endif

#include "fairtext/metrics.hpp"
#include "fairtext/train.hpp"

using namespace fairtext;

namespace {

double now_seconds() {
    using clock = std::chrono::steady_clock;
    return std::chrono::duration<double>(clock::now().time_since_epoch()).count();
}

struct Workload {
    Vocabulary vocab;
    ClassifierParams params;
    std::vector<PairedSample> pairs;
    std::vector<TrainItem> items;
    std::vector<const Vec*> masks;
};

Workload make_workload(int n_pairs, int vocab_size, int d, int tokens_per_text) {
    Workload w;
    std::vector<std::string> pool;
    for (int i = 0; i < vocab_size; ++i) pool.push_back("tok" + std::to_string(i));
    std::vector<TokenSequence> base = {TokenSequence(pool.begin(), pool.end())};
    w.vocab = Vocabulary::build(base, 1);
    w.params = ClassifierParams::init(w.vocab.size(), d, 2, 0.0, 42);

    std::mt19937_64 rng(7);
    std::uniform_int_distribution<std::size_t> pick(0, pool.size() - 1);
    w.pairs.reserve(n_pairs);
    for (int i = 0; i < n_pairs; ++i) {
        PairedSample p;
        p.pair_id = std::to_string(i);
        p.label = i % 2;
        for (int t = 0; t < tokens_per_text; ++t) {
            p.original.push_back(pool[pick(rng)]);
        }
        p.variants.push_back(p.original);
        p.variants[0][0] = pool[pick(rng)];
        w.pairs.push_back(std::move(p));
    }
    for (const auto& p : w.pairs) {
        w.items.push_back({&p.original, &p.variants[0], p.label});
        w.masks.push_back(nullptr);
    }
    return w;
}

}  // namespace

int main(int argc, char** argv) {
    int n_pairs = argc > 1 ? std::stoi(argv[1]) : 4096;
    int repeats = argc > 2 ? std::stoi(argv[2]) : 5;

#ifdef _OPENMP
    std::cout << "OpenMP threads: " << omp_get_max_threads() << '\n';
#else
    std::cout << "OpenMP not enabled; both paths run serially\n";
#endif

    auto w = make_workload(n_pairs, 2000, 32, 24);
    std::cout << "workload: " << n_pairs << " pairs, d=" << w.params.embed_dim
              << ", vocab=" << w.vocab.size() << "\n\n";

    // Batch gradient kernel.
    double t0 = now_seconds();
    Gradients serial;
    for (int r = 0; r < repeats; ++r) {
        serial = batch_gradients_serial(w.items, w.masks, w.params, w.vocab, 1.0);
    }
    double serial_time = (now_seconds() - t0) / repeats;

    t0 = now_seconds();
    Gradients parallel;
    for (int r = 0; r < repeats; ++r) {
        parallel = batch_gradients_parallel(w.items, w.masks, w.params, w.vocab, 1.0);
    }
    double parallel_time = (now_seconds() - t0) / repeats;

    bool grads_equal = serial.head_weights == parallel.head_weights &&
                       serial.head_bias == parallel.head_bias &&
                       serial.embedding_rows.size() == parallel.embedding_rows.size();
    for (const auto& [row, grad] : serial.embedding_rows) {
        auto it = parallel.embedding_rows.find(row);
        if (it == parallel.embedding_rows.end() || it->second != grad) {
            grads_equal = false;
            break;
        }
    }

    std::cout << "batch gradients:  serial " << serial_time << " s, parallel "
              << parallel_time << " s, speedup "
              << (parallel_time > 0 ? serial_time / parallel_time : 0.0)
              << "x, bitwise equal: " << (grads_equal ? "yes" : "NO") << '\n';

    // Paired-evaluation kernel.
    t0 = now_seconds();
    MismatchCount serial_count;
    for (int r = 0; r < repeats; ++r) {
        serial_count = count_mismatches(w.params, w.vocab, w.pairs, false);
    }
    double eval_serial = (now_seconds() - t0) / repeats;

    t0 = now_seconds();
    MismatchCount parallel_count;
    for (int r = 0; r < repeats; ++r) {
        parallel_count = count_mismatches(w.params, w.vocab, w.pairs, true);
    }
    double eval_parallel = (now_seconds() - t0) / repeats;

    bool counts_equal = serial_count.mismatches == parallel_count.mismatches;
    std::cout << "pair evaluation:  serial " << eval_serial << " s, parallel "
              << eval_parallel << " s, speedup "
              << (eval_parallel > 0 ? eval_serial / eval_parallel : 0.0)
              << "x, counts equal: " << (counts_equal ? "yes" : "NO") << '\n';

    return grads_equal && counts_equal ? 0 : 1;
}
