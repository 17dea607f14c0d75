#pragma once

#include "emi/demo/dataset.hpp"
#include "emi/demo/model.hpp"
#include "emi/runtime/service.hpp"

#include <memory>

namespace emi::demo {

/// Wire form of one publication, field order as in the contract types.
idl::Value publicationValue(const Publication& pub, bool withDoi);

runtime::Behavior pubCatBehavior(std::shared_ptr<const Dataset> data);
runtime::Behavior pubCatV2Behavior(std::shared_ptr<const Dataset> data);
runtime::Behavior citIndBehavior(std::shared_ptr<const Dataset> data);

/// Ready-to-add service specs: one input port named "ip" at `at`.
runtime::ServiceSpec pubCatService(std::string name, runtime::Location at,
                                   std::shared_ptr<const Dataset> data);
runtime::ServiceSpec pubCatV2Service(std::string name, runtime::Location at,
                                     std::shared_ptr<const Dataset> data);
runtime::ServiceSpec citIndService(std::string name, runtime::Location at,
                                   std::shared_ptr<const Dataset> data);

} // namespace emi::demo
