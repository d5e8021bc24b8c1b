export {
  readEdges,
  readPartition,
  readCentrality,
  readProfile,
  sidecarPath,
  ValidationError,
} from "./schema.js";
export type { EdgeRow, EngagementProfile, Sector } from "./schema.js";
export { renderPolar, writePolar } from "./polar.js";
export type { PolarOptions, PolarSidecar, PolarSectorOut } from "./polar.js";
export { renderNetwork, writeNetwork } from "./network.js";
export type { NetworkOptions, NetworkSidecar, NetworkNodeOut } from "./network.js";
export { main } from "./cli.js";
