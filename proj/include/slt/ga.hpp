#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <cstdio>
#include <fstream>
#include <numeric>
#include <optional>
#include <stdexcept>
#include <string>
#include <unordered_map>
#include <utility>
#include <vector>

#include "slt/dataset.hpp"
#include "slt/genotype.hpp"
#include "slt/network.hpp"
#include "slt/rng.hpp"

namespace slt {

struct Individual {
    Genotype genotype;
    double train_accuracy = 0.0;
    double sparsity = 0.0;
    int birth_generation = 0;
};

using Population = std::vector<Individual>;

// Minimum-fitness gate for admitting individuals into the initial
// population; decays toward `floor` by one exponential step per rejected
// batch: bound(t) = floor + (initial - floor) * exp(-t / decay_tau).
struct AdaptiveBound {
    double initial = 0.85;
    double floor = 0.5;
    double decay_tau = 5.0;
    int batch = 1000;
};

enum class CrossoverKind { Uniform, SinglePoint };

struct GAConfig {
    int pop_size = 100;
    double rec_rate = 0.3;
    double par_rate = 0.3;
    double mut_rate = 0.1;
    double mig_rate = 0.1;
    std::optional<AdaptiveBound> adaptive_bound;
    int max_generations = 0; // 0 = auto: 200 in adaptive mode, unbounded otherwise
    int min_generations = 100;
    int stagnation_window = 50;
    std::uint64_t seed = 0;
    CrossoverKind crossover = CrossoverKind::Uniform;
    std::size_t fitness_subsample = 0; // 0 = evaluate on the full train set

    int effective_max_generations() const {
        if (max_generations > 0) return max_generations;
        return adaptive_bound ? 200 : 0;
    }

    void validate() const {
        if (pop_size < 2) throw std::invalid_argument("ga: pop_size must be >= 2");
        for (double r : {rec_rate, par_rate, mut_rate, mig_rate})
            if (!(r >= 0.0 && r <= 1.0)) throw std::invalid_argument("ga: rates must be in [0, 1]");
        if (adaptive_bound) {
            if (!(adaptive_bound->initial >= adaptive_bound->floor))
                throw std::invalid_argument("ga: bound initial must be >= floor");
            if (!(adaptive_bound->decay_tau > 0.0) || adaptive_bound->batch < 1)
                throw std::invalid_argument("ga: bad bound decay parameters");
        }
        if (min_generations < 0 || stagnation_window < 1)
            throw std::invalid_argument("ga: bad termination parameters");
    }
};

struct GenerationRecord {
    int generation = 0;
    double best_accuracy = 0.0;
    double best_individual_sparsity = 0.0;
    double best_population_sparsity = 0.0;
    double best_sparsity_ever_at_best_accuracy = 0.0;
    double mean_accuracy = 0.0;
    std::size_t population_size_before_cut = 0;
    double active_bound = 0.0;
};

struct EvolutionLog {
    std::vector<GenerationRecord> records;

    void save_csv(const std::string& path) const {
        std::ofstream out(path);
        if (!out) throw std::runtime_error("evolution log: cannot open " + path);
        out << "generation,best_acc,best_ind_sparsity,best_pop_sparsity,"
               "best_ever_sparsity_at_best_acc,mean_acc,interim_size,active_bound\n";
        char buf[256];
        for (const auto& r : records) {
            std::snprintf(buf, sizeof buf, "%d,%.17g,%.17g,%.17g,%.17g,%.17g,%zu,%.17g\n",
                          r.generation, r.best_accuracy, r.best_individual_sparsity,
                          r.best_population_sparsity, r.best_sparsity_ever_at_best_accuracy,
                          r.mean_accuracy, r.population_size_before_cut, r.active_bound);
            out << buf;
        }
        if (!out) throw std::runtime_error("evolution log: write failed for " + path);
    }
};

inline Genotype random_genotype(std::size_t n, Rng& rng) {
    if (n < 1) throw std::invalid_argument("random_genotype: n must be >= 1");
    return Genotype::random(n, rng);
}

// Survivor ranking: accuracy first, sparsity within equal accuracy, then
// deterministic tie-breakers (older birth, insertion order).
inline std::vector<std::size_t> rank_lexicographic(const Population& pop) {
    std::vector<std::size_t> idx(pop.size());
    std::iota(idx.begin(), idx.end(), std::size_t{0});
    std::stable_sort(idx.begin(), idx.end(), [&pop](std::size_t a, std::size_t b) {
        const Individual& x = pop[a];
        const Individual& y = pop[b];
        if (x.train_accuracy != y.train_accuracy) return x.train_accuracy > y.train_accuracy;
        if (x.sparsity != y.sparsity) return x.sparsity > y.sparsity;
        return x.birth_generation < y.birth_generation;
    });
    return idx;
}

// Parent ranking considers the accuracy goal only.
inline std::vector<std::size_t> rank_by_accuracy(const Population& pop) {
    std::vector<std::size_t> idx(pop.size());
    std::iota(idx.begin(), idx.end(), std::size_t{0});
    std::stable_sort(idx.begin(), idx.end(), [&pop](std::size_t a, std::size_t b) {
        if (pop[a].train_accuracy != pop[b].train_accuracy)
            return pop[a].train_accuracy > pop[b].train_accuracy;
        return pop[a].birth_generation < pop[b].birth_generation;
    });
    return idx;
}

// Each member becomes a first parent with chance rec_rate; its mate is
// drawn uniformly from the top ceil(N * par_rate) by accuracy. Self-mating
// is re-drawn once, then allowed.
inline std::vector<std::pair<std::size_t, std::size_t>>
select_parents(const Population& pop, const GAConfig& cfg, Rng& rng) {
    if (pop.empty()) throw std::invalid_argument("select_parents: empty population");
    const auto ranked = rank_by_accuracy(pop);
    const auto l = std::max<std::size_t>(
        1, std::min(pop.size(), static_cast<std::size_t>(
                                    std::ceil(static_cast<double>(pop.size()) * cfg.par_rate))));
    std::vector<std::pair<std::size_t, std::size_t>> pairs;
    for (std::size_t i = 0; i < pop.size(); ++i) {
        if (!rng.bernoulli(cfg.rec_rate)) continue;
        std::size_t mate = ranked[static_cast<std::size_t>(rng.below(l))];
        if (mate == i) mate = ranked[static_cast<std::size_t>(rng.below(l))];
        pairs.emplace_back(i, mate);
    }
    return pairs;
}

inline Genotype crossover(const Genotype& a, const Genotype& b, Rng& rng,
                          CrossoverKind kind = CrossoverKind::Uniform) {
    return kind == CrossoverKind::Uniform ? Genotype::uniform_crossover(a, b, rng)
                                          : Genotype::single_point_crossover(a, b, rng);
}

inline Genotype mutate(const Genotype& g, Rng& rng) { return g.mutated(rng); }

namespace detail {

struct GenotypeHash {
    std::size_t operator()(const Genotype& g) const {
        return static_cast<std::size_t>(g.hash());
    }
};

// Memoizes fitness per genotype value: every distinct genotype hits the
// oracle exactly once per run, repeats return the cached accuracy.
template <typename Oracle>
class CachedFitness {
public:
    explicit CachedFitness(Oracle& oracle) : oracle_(&oracle) {}

    double operator()(const Genotype& g) {
        auto it = cache_.find(g);
        if (it != cache_.end()) {
            ++hits_;
            return it->second;
        }
        const double v = (*oracle_)(g);
        cache_.emplace(g, v);
        ++misses_;
        return v;
    }

    std::size_t hits() const { return hits_; }
    std::size_t misses() const { return misses_; }

private:
    Oracle* oracle_;
    std::unordered_map<Genotype, double, GenotypeHash> cache_;
    std::size_t hits_ = 0;
    std::size_t misses_ = 0;
};

inline Individual make_individual(Genotype g, double acc, int birth) {
    Individual ind;
    ind.sparsity = sparsity(g);
    ind.genotype = std::move(g);
    ind.train_accuracy = acc;
    ind.birth_generation = birth;
    return ind;
}

} // namespace detail

struct InitPopulationResult {
    Population pop;
    std::size_t candidates_evaluated = 0;
    double final_bound = 0.0;
};

// Plain mode accepts every random genotype; adaptive mode rejects
// candidates below the current accuracy bound and decays the bound one
// step per full batch of rejections.
template <typename Fitness>
InitPopulationResult init_population(const GAConfig& cfg, std::size_t genotype_len,
                                     Fitness&& fitness, Rng& rng) {
    cfg.validate();
    InitPopulationResult res;
    res.pop.reserve(static_cast<std::size_t>(cfg.pop_size));
    double bound = 0.0;
    if (cfg.adaptive_bound) {
        const AdaptiveBound& ab = *cfg.adaptive_bound;
        bound = ab.initial;
        int t = 0;
        int rejected_in_batch = 0;
        while (res.pop.size() < static_cast<std::size_t>(cfg.pop_size)) {
            Genotype g = random_genotype(genotype_len, rng);
            const double acc = fitness(g);
            ++res.candidates_evaluated;
            if (acc >= bound) {
                res.pop.push_back(detail::make_individual(std::move(g), acc, 0));
            } else if (++rejected_in_batch >= ab.batch) {
                ++t;
                bound = ab.floor + (ab.initial - ab.floor) * std::exp(-t / ab.decay_tau);
                rejected_in_batch = 0;
            }
        }
    } else {
        while (res.pop.size() < static_cast<std::size_t>(cfg.pop_size)) {
            Genotype g = random_genotype(genotype_len, rng);
            const double acc = fitness(g);
            ++res.candidates_evaluated;
            res.pop.push_back(detail::make_individual(std::move(g), acc, 0));
        }
    }
    res.final_bound = bound;
    return res;
}

// One generation: crossover children, mutants of the pre-step survivors,
// fresh migrants, then elitist cut back to N. All random decisions come
// from `rng` in one sequential pass; only the fitness calls on the fixed
// batch of new genotypes are free to run elsewhere.
template <typename Fitness>
GenerationRecord step_generation(Population& pop, const GAConfig& cfg, Fitness&& fitness,
                                 Rng& rng, int generation, double active_bound = 0.0) {
    const std::size_t n = static_cast<std::size_t>(cfg.pop_size);
    if (pop.size() != n) throw std::invalid_argument("step_generation: population size != N");

    std::vector<Genotype> fresh;
    const auto pairs = select_parents(pop, cfg, rng);
    for (const auto& [a, b] : pairs)
        fresh.push_back(crossover(pop[a].genotype, pop[b].genotype, rng, cfg.crossover));
    for (std::size_t i = 0; i < n; ++i)
        if (rng.bernoulli(cfg.mut_rate)) fresh.push_back(mutate(pop[i].genotype, rng));
    const auto migrants = static_cast<std::size_t>(
        std::ceil(static_cast<double>(cfg.pop_size) * cfg.mig_rate));
    for (std::size_t m = 0; m < migrants; ++m)
        fresh.push_back(random_genotype(pop[0].genotype.size(), rng));

    for (auto& g : fresh) {
        const double acc = fitness(g);
        pop.push_back(detail::make_individual(std::move(g), acc, generation));
    }

    GenerationRecord rec;
    rec.generation = generation;
    rec.population_size_before_cut = pop.size();
    rec.active_bound = active_bound;

    const auto order = rank_lexicographic(pop);
    Population next;
    next.reserve(n);
    for (std::size_t k = 0; k < n; ++k) next.push_back(std::move(pop[order[k]]));
    pop.swap(next);

    rec.best_accuracy = pop.front().train_accuracy;
    rec.best_individual_sparsity = pop.front().sparsity;
    rec.best_sparsity_ever_at_best_accuracy = pop.front().sparsity;
    double mean = 0.0, best_sp = 0.0;
    for (const auto& ind : pop) {
        mean += ind.train_accuracy;
        best_sp = std::max(best_sp, ind.sparsity);
    }
    rec.mean_accuracy = mean / static_cast<double>(pop.size());
    rec.best_population_sparsity = best_sp;
    return rec;
}

// Termination: at least min_generations evolved with no best-accuracy
// improvement across the last stagnation_window generations, or the
// adaptive-bound generation cap.
inline bool should_terminate(const EvolutionLog& log, const GAConfig& cfg) {
    if (log.records.empty()) return false;
    const GenerationRecord& last = log.records.back();
    const int gens = last.generation;
    if (cfg.adaptive_bound && cfg.effective_max_generations() > 0 &&
        gens >= cfg.effective_max_generations())
        return true;
    if (gens < cfg.min_generations || gens < cfg.stagnation_window) return false;
    const int anchor = gens - cfg.stagnation_window;
    for (auto it = log.records.rbegin(); it != log.records.rend(); ++it) {
        if (it->generation == anchor) return last.best_accuracy <= it->best_accuracy;
        if (it->generation < anchor) break;
    }
    return false;
}

struct EvolveResult {
    Individual best;
    EvolutionLog log;
    std::size_t fitness_evaluations = 0; // distinct genotypes scored
    std::size_t cache_hits = 0;
};

// Full evolution loop against an arbitrary fitness oracle
// (double(const Genotype&), higher is better, expected in [0, 1]).
template <typename Oracle>
EvolveResult evolve_with_oracle(const GAConfig& cfg, std::size_t genotype_len, Oracle&& oracle) {
    cfg.validate();
    if (genotype_len < 1) throw std::invalid_argument("evolve: empty genotype space");
    Rng rng(cfg.seed);
    detail::CachedFitness<std::remove_reference_t<Oracle>> fitness(oracle);

    auto init = init_population(cfg, genotype_len, fitness, rng);
    Population pop = std::move(init.pop);
    {
        const auto order = rank_lexicographic(pop);
        Population sorted;
        sorted.reserve(pop.size());
        for (auto k : order) sorted.push_back(std::move(pop[k]));
        pop.swap(sorted);
    }

    EvolveResult res;
    GenerationRecord rec0;
    rec0.generation = 0;
    rec0.best_accuracy = pop.front().train_accuracy;
    rec0.best_individual_sparsity = pop.front().sparsity;
    rec0.population_size_before_cut = init.candidates_evaluated;
    rec0.active_bound = init.final_bound;
    double mean = 0.0, best_sp = 0.0;
    for (const auto& ind : pop) {
        mean += ind.train_accuracy;
        best_sp = std::max(best_sp, ind.sparsity);
    }
    rec0.mean_accuracy = mean / static_cast<double>(pop.size());
    rec0.best_population_sparsity = best_sp;

    // Best sparsity observed at the current best-accuracy level; resets
    // when a new accuracy level is reached.
    double best_acc_ever = rec0.best_accuracy;
    double ever_sp = rec0.best_individual_sparsity;
    rec0.best_sparsity_ever_at_best_accuracy = ever_sp;
    res.log.records.push_back(rec0);

    for (int g = 1;; ++g) {
        GenerationRecord rec = step_generation(pop, cfg, fitness, rng, g, init.final_bound);
        if (rec.best_accuracy > best_acc_ever) {
            best_acc_ever = rec.best_accuracy;
            ever_sp = rec.best_individual_sparsity;
        } else {
            ever_sp = std::max(ever_sp, rec.best_individual_sparsity);
        }
        rec.best_sparsity_ever_at_best_accuracy = ever_sp;
        res.log.records.push_back(rec);
        if (should_terminate(res.log, cfg)) break;
    }

    res.best = pop.front();
    res.fitness_evaluations = fitness.misses();
    res.cache_hits = fitness.hits();
    return res;
}

// Evolution against a frozen network on a train set: fitness is the
// masked network's train accuracy (float forward path).
inline EvolveResult evolve(const GAConfig& cfg, const NetworkParams& params,
                           const Dataset& train) {
    const Dataset* eval_set = &train;
    Dataset subsample;
    if (cfg.fitness_subsample > 0 && cfg.fitness_subsample < train.rows) {
        Rng srng(mix_seed(cfg.seed, stream::data));
        std::vector<std::size_t> idx(train.rows);
        std::iota(idx.begin(), idx.end(), std::size_t{0});
        for (std::size_t i = idx.size(); i > 1; --i)
            std::swap(idx[i - 1], idx[static_cast<std::size_t>(srng.below(i))]);
        idx.resize(cfg.fitness_subsample);
        subsample.cols = train.cols;
        subsample.n_classes = train.n_classes;
        subsample.rows = idx.size();
        for (std::size_t r : idx) {
            const auto row = train.row(r);
            subsample.x.insert(subsample.x.end(), row.begin(), row.end());
            subsample.labels.push_back(train.labels[r]);
        }
        eval_set = &subsample;
    }
    FastBatchEvaluator eval(params, *eval_set);
    auto oracle = [&eval](const Genotype& g) { return eval.accuracy(g); };
    return evolve_with_oracle(cfg, params.arch.weight_count(), oracle);
}

} // namespace slt
