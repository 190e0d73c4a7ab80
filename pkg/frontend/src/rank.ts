import type { RankEntry } from "./types.js";

/** Where a draft composite would slot into the server's ranking.
 *
 * This is the one piece of ordering the client does itself, and it is
 * pure comparison: higher composite first, ties broken by ascending id,
 * the IU's own current entry ignored. Returns a 1-based position.
 */
export function insertionPosition(
  rank: RankEntry[],
  iuId: string,
  draftComposite: number,
): { position: number; total: number } {
  const others = rank.filter((entry) => entry.iu_id !== iuId);
  let ahead = 0;
  for (const entry of others) {
    if (
      entry.composite > draftComposite ||
      (entry.composite === draftComposite && entry.iu_id < iuId)
    ) {
      ahead += 1;
    }
  }
  return { position: ahead + 1, total: others.length + 1 };
}
