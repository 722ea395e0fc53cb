#pragma once

#include <algorithm>
#include <cstdint>
#include <stdexcept>
#include <utility>
#include <vector>

#include "evoclust/dataset.hpp"
#include "evoclust/gaussian.hpp"
#include "evoclust/parallel.hpp"
#include "evoclust/rng.hpp"

namespace evoclust {

// A hard labeling with its cached fitness (log-likelihood at the hard-label
// estimates, or -inf when infeasible).
struct Candidate {
    HardLabels labels;
    double fitness = kNegInf;
};

struct EAConfig {
    int groups = 2;
    int parents = 2;
    int clones = 10;
    int stagnation = 3;
    std::uint64_t seed = 0;
    int max_generations = 10000;
    double ridge = 0.0;
};

struct GenerationLog {
    int generation = 0;
    double best_fitness = kNegInf;
    int stag_counter = 0;
    long swaps_attempted = 0;
    int mutations_accepted = 0;
};

struct EvolveResult {
    Candidate best;
    std::vector<Candidate> parents;
    std::vector<GenerationLog> log;
    int generations = 0;
};

namespace detail {

// Picks two observations with different assignments and exchanges their
// label rows. Returns the number of pair draws needed.
inline long swap_random_pair(HardLabels& labels, Rng& rng) {
    const int n = labels.n();
    long attempts = 0;
    for (;;) {
        ++attempts;
        const int i = static_cast<int>(rng.below(n));
        const int j = static_cast<int>(rng.below(n));
        if (labels.assign[i] != labels.assign[j]) {
            std::swap(labels.assign[i], labels.assign[j]);
            return attempts;
        }
        if (attempts > 64L * n * n) {
            throw NoDistinctPair("crossover: all observations share one assignment");
        }
    }
}

inline bool has_distinct_pair(const HardLabels& labels) {
    for (std::size_t i = 1; i < labels.assign.size(); ++i) {
        if (labels.assign[i] != labels.assign[0]) return true;
    }
    return false;
}

// Sorted canonical forms of a parent set; two sets compare equal iff they
// hold the same partitions up to component renumbering.
inline std::vector<std::vector<int>> canonical_set(const std::vector<Candidate>& parents) {
    std::vector<std::vector<int>> forms;
    forms.reserve(parents.size());
    for (const Candidate& c : parents) forms.push_back(c.labels.canonical());
    std::sort(forms.begin(), forms.end());
    return forms;
}

}  // namespace detail

// One crossover: the full label rows of two randomly chosen, differently
// assigned observations are exchanged; the child's fitness is cached.
inline Candidate crossover_swap(const Dataset& data, const Candidate& parent, Rng& rng,
                                double ridge = 0.0) {
    if (!detail::has_distinct_pair(parent.labels)) {
        throw NoDistinctPair("crossover: all observations share one assignment");
    }
    Candidate child;
    child.labels = parent.labels;
    detail::swap_random_pair(child.labels, rng);
    child.fitness = fitness(data, child.labels, ridge);
    return child;
}

// Greedy first-improvement mutation: visits observations in a random order,
// moves each to another component, keeps the first move that strictly
// increases fitness, and stops there. Rejected moves are reverted.
inline std::pair<Candidate, bool> mutate_greedy(const Dataset& data, const Candidate& parent,
                                                Rng& rng, double ridge = 0.0) {
    const int G = parent.labels.groups;
    const std::vector<int> order = rng.permutation(parent.labels.n());
    Candidate child = parent;
    for (int idx : order) {
        const int current = child.labels.assign[idx];
        int target;
        if (G == 2) {
            target = 1 - current;
        } else {
            // Uniform over the other G-1 components.
            const int t = static_cast<int>(rng.below(G - 1));
            target = (t >= current) ? t + 1 : t;
        }
        child.labels.assign[idx] = target;
        const double f = fitness(data, child.labels, ridge);
        if (f > parent.fitness) {
            child.fitness = f;
            return {std::move(child), true};
        }
        child.labels.assign[idx] = current;
    }
    return {parent, false};
}

// The full evolutionary loop: per generation each parent spawns `clones`
// crossover children; parents and children are pooled and the fittest
// `parents` survive; each survivor then attempts one greedy mutation. The
// stagnation counter grows when the surviving set is unchanged and again
// when no mutation improves; the run stops once it reaches the configured
// stagnation (or the generation cap).
inline EvolveResult evolve(const Dataset& data, const EAConfig& config,
                           const std::vector<HardLabels>& init_parents, int threads = 1) {
    if (config.parents < 1 || config.clones < 1 || config.stagnation < 1) {
        throw std::invalid_argument("evolve: parents, clones, and stagnation must be positive");
    }
    if (static_cast<int>(init_parents.size()) != config.parents) {
        throw std::invalid_argument("evolve: expected exactly config.parents initial labelings");
    }

    std::vector<Candidate> parents;
    parents.reserve(config.parents);
    for (const HardLabels& labels : init_parents) {
        if (labels.groups != config.groups || labels.n() != data.n() || !labels.in_range()) {
            throw std::invalid_argument("evolve: init labeling does not match data/config");
        }
        Candidate c{labels, fitness(data, labels, config.ridge)};
        if (c.fitness == kNegInf) {
            detail::LabelEstimates est =
                detail::try_estimate_from_labels(data, labels, config.ridge);
            throw InfeasibleLabeling("evolve: infeasible initial labeling: " + est.reason,
                                     est.bad_component);
        }
        parents.push_back(std::move(c));
    }
    std::sort(parents.begin(), parents.end(),
              [](const Candidate& a, const Candidate& b) { return a.fitness > b.fitness; });

    EvolveResult result;
    Rng rng(config.seed);
    std::vector<std::vector<int>> prev_top = detail::canonical_set(parents);
    int stag = 0;
    int generation = 0;

    while (stag < config.stagnation && generation < config.max_generations) {
        ++generation;
        GenerationLog entry;
        entry.generation = generation;

        // Crossover: all random draws happen serially here; only the pure
        // fitness evaluations run on worker threads.
        std::vector<Candidate> children;
        children.reserve(static_cast<std::size_t>(config.parents) * config.clones);
        for (const Candidate& parent : parents) {
            for (int b = 0; b < config.clones; ++b) {
                Candidate child;
                child.labels = parent.labels;
                entry.swaps_attempted += detail::swap_random_pair(child.labels, rng);
                children.push_back(std::move(child));
            }
        }
        parallel_for(children.size(), threads, [&](std::size_t k) {
            children[k].fitness = fitness(data, children[k].labels, config.ridge);
        });

        // Selection: pool parents and children, keep the fittest; ties favor
        // incumbents, then earlier creation.
        std::vector<std::pair<const Candidate*, int>> pool;
        pool.reserve(parents.size() + children.size());
        int order = 0;
        for (const Candidate& c : parents) pool.emplace_back(&c, order++);
        for (const Candidate& c : children) pool.emplace_back(&c, order++);
        std::sort(pool.begin(), pool.end(), [](const auto& a, const auto& b) {
            if (a.first->fitness != b.first->fitness) {
                return a.first->fitness > b.first->fitness;
            }
            return a.second < b.second;
        });
        std::vector<Candidate> survivors;
        survivors.reserve(config.parents);
        for (int s = 0; s < config.parents; ++s) survivors.push_back(*pool[s].first);
        parents = std::move(survivors);

        std::vector<std::vector<int>> top = detail::canonical_set(parents);
        if (top == prev_top) {
            ++stag;
        } else {
            stag = 0;
        }
        prev_top = std::move(top);

        // Mutation: greedy first-improvement per parent.
        int accepted = 0;
        for (Candidate& parent : parents) {
            auto [mutated, ok] = mutate_greedy(data, parent, rng, config.ridge);
            if (ok) {
                parent = std::move(mutated);
                ++accepted;
            }
        }
        if (accepted == 0) {
            ++stag;
        } else {
            std::sort(parents.begin(), parents.end(), [](const Candidate& a, const Candidate& b) {
                return a.fitness > b.fitness;
            });
        }

        entry.best_fitness = parents.front().fitness;
        entry.stag_counter = stag;
        entry.mutations_accepted = accepted;
        result.log.push_back(entry);
    }

    result.best = parents.front();
    result.parents = std::move(parents);
    result.generations = generation;
    return result;
}

}  // namespace evoclust
