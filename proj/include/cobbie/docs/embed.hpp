#pragma once
// Embedding interface plus the deterministic test embedder.

#include <string>
#include <vector>

namespace cobbie::docs {

// lowercase, split on non-alphanumerics, drop tokens shorter than 2
std::vector<std::string> tokenize(const std::string& text);

class Embedder {
public:
    virtual ~Embedder() = default;
    virtual std::size_t dimension() const = 0;
    virtual std::vector<double> embed(const std::string& text) const = 0;
};

// Hashed bag of words: FNV-1a bucket per token, unit-normalized.
class HashedBowEmbedder : public Embedder {
public:
    explicit HashedBowEmbedder(std::size_t dim = 256) : dim_(dim) {}
    std::size_t dimension() const override { return dim_; }
    std::vector<double> embed(const std::string& text) const override;

private:
    std::size_t dim_;
};

double cosine(const std::vector<double>& a, const std::vector<double>& b);

}  // namespace cobbie::docs
