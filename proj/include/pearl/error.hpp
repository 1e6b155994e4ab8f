#pragma once

#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

namespace pearl {

// Every engine failure derives from Error. name() is the stable tag that the
// command line front end reports; indices() carries the offending pearl
// indices (0-based) where that makes sense.
class Error : public std::runtime_error {
public:
    Error(std::string name, const std::string& message, std::vector<int> indices = {})
        : std::runtime_error(message), name_(std::move(name)), indices_(std::move(indices)) {}

    const std::string& name() const noexcept { return name_; }
    const std::vector<int>& indices() const noexcept { return indices_; }

private:
    std::string name_;
    std::vector<int> indices_;
};

#define PEARL_DEFINE_ERROR(Type)                                                     \
    class Type : public Error {                                                      \
    public:                                                                          \
        explicit Type(const std::string& message, std::vector<int> indices = {})     \
            : Error(#Type, message, std::move(indices)) {}                           \
    }

PEARL_DEFINE_ERROR(PoleError);
PEARL_DEFINE_ERROR(NotTangent);
PEARL_DEFINE_ERROR(NotDisjoint);
PEARL_DEFINE_ERROR(TooFewPearls);
PEARL_DEFINE_ERROR(PoleRisk);
PEARL_DEFINE_ERROR(UnequalEdges);
PEARL_DEFINE_ERROR(BudgetExceeded);
PEARL_DEFINE_ERROR(EmptyCloud);
PEARL_DEFINE_ERROR(NotACycle);
PEARL_DEFINE_ERROR(NotInLimit);
PEARL_DEFINE_ERROR(ConfigError);

#undef PEARL_DEFINE_ERROR

}  // namespace pearl
