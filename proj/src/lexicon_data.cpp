// Copyright 2026 The XLT Authors.
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include "xlt/lexicon_data.hpp"

namespace xlt::text::detail {

// English unigram counts, rank-ordered (synthetic Zipf mass).
const WordCount kBuiltinEnglish[] = {
    {"the", 3500000000.0},
    {"of", 1750000000.0},
    {"and", 1166666666.0},
    {"to", 875000000.0},
    {"a", 700000000.0},
    {"in", 583333333.0},
    {"for", 500000000.0},
    {"is", 437500000.0},
    {"on", 388888888.0},
    {"that", 350000000.0},
    {"by", 318181818.0},
    {"this", 291666666.0},
    {"with", 269230769.0},
    {"i", 250000000.0},
    {"you", 233333333.0},
    {"it", 218750000.0},
    {"not", 205882352.0},
    {"or", 194444444.0},
    {"be", 184210526.0},
    {"are", 175000000.0},
    {"from", 166666666.0},
    {"at", 159090909.0},
    {"as", 152173913.0},
    {"your", 145833333.0},
    {"all", 140000000.0},
    {"have", 134615384.0},
    {"new", 129629629.0},
    {"more", 125000000.0},
    {"an", 120689655.0},
    {"was", 116666666.0},
    {"we", 112903225.0},
    {"will", 109375000.0},
    {"home", 106060606.0},
    {"can", 102941176.0},
    {"us", 100000000.0},
    {"about", 97222222.0},
    {"if", 94594594.0},
    {"page", 92105263.0},
    {"my", 89743589.0},
    {"has", 87500000.0},
    {"search", 85365853.0},
    {"free", 83333333.0},
    {"but", 81395348.0},
    {"our", 79545454.0},
    {"one", 77777777.0},
    {"other", 76086956.0},
    {"do", 74468085.0},
    {"no", 72916666.0},
    {"information", 71428571.0},
    {"time", 70000000.0},
    {"they", 68627450.0},
    {"site", 67307692.0},
    {"he", 66037735.0},
    {"up", 64814814.0},
    {"may", 63636363.0},
    {"what", 62500000.0},
    {"which", 61403508.0},
    {"their", 60344827.0},
    {"news", 59322033.0},
    {"out", 58333333.0},
    {"them", 58333333.0},
    {"use", 57377049.0},
    {"any", 56451612.0},
    {"there", 55555555.0},
    {"see", 54687500.0},
    {"only", 53846153.0},
    {"so", 53030303.0},
    {"his", 52238805.0},
    {"when", 51470588.0},
    {"contact", 50724637.0},
    {"here", 50000000.0},
    {"business", 49295774.0},
    {"who", 48611111.0},
    {"web", 47945205.0},
    {"also", 47297297.0},
    {"now", 46666666.0},
    {"help", 46052631.0},
    {"get", 45454545.0},
    {"view", 44871794.0},
    {"online", 44303797.0},
    {"first", 43750000.0},
    {"am", 43209876.0},
    {"been", 42682926.0},
    {"would", 42168674.0},
    {"how", 41666666.0},
    {"were", 41176470.0},
    {"me", 40697674.0},
    {"services", 40229885.0},
    {"some", 39772727.0},
    {"these", 39325842.0},
    {"click", 38888888.0},
    {"its", 38461538.0},
    {"like", 38043478.0},
    {"service", 37634408.0},
    {"than", 37234042.0},
    {"find", 36842105.0},
    {"price", 36458333.0},
    {"date", 36082474.0},
    {"back", 35714285.0},
    {"top", 35353535.0},
    {"people", 35000000.0},
    {"had", 34653465.0},
    {"list", 34313725.0},
    {"name", 33980582.0},
    {"just", 33653846.0},
    {"over", 33333333.0},
    {"state", 33018867.0},
    {"year", 32710280.0},
    {"day", 32407407.0},
    {"into", 32110091.0},
    {"email", 31818181.0},
    {"world", 31818181.0},
    {"two", 31531531.0},
    {"health", 31250000.0},
    {"next", 30701754.0},
    {"used", 30434782.0},
    {"go", 30172413.0},
    {"work", 29914529.0},
    {"last", 29661016.0},
    {"most", 29411764.0},
    {"products", 29166666.0},
    {"music", 28925619.0},
    {"buy", 28688524.0},
    {"data", 28455284.0},
    {"make", 28225806.0},
    {"should", 27777777.0},
    {"product", 27559055.0},
    {"system", 27343750.0},
    {"post", 27131782.0},
    {"her", 26923076.0},
    {"city", 26717557.0},
    {"add", 26515151.0},
    {"policy", 26315789.0},
    {"number", 26119402.0},
    {"such", 25925925.0},
    {"please", 25735294.0},
    {"available", 25547445.0},
    {"copyright", 25362318.0},
    {"support", 25179856.0},
    {"message", 25000000.0},
    {"after", 24822695.0},
    {"best", 24647887.0},
    {"software", 24475524.0},
    {"then", 24305555.0},
    {"good", 24137931.0},
    {"video", 23972602.0},
    {"well", 23809523.0},
    {"where", 23648648.0},
    {"info", 23489932.0},
    {"rights", 23333333.0},
    {"public", 23178807.0},
    {"books", 23026315.0},
    {"high", 22875816.0},
    {"school", 22727272.0},
    {"through", 22580645.0},
    {"each", 22435897.0},
    {"links", 22292993.0},
    {"she", 22151898.0},
    {"review", 22012578.0},
    {"years", 21875000.0},
    {"order", 21739130.0},
    {"very", 21604938.0},
    {"privacy", 21472392.0},
    {"book", 21341463.0},
    {"items", 21212121.0},
    {"company", 21084337.0},
    {"read", 20958083.0},
    {"group", 20833333.0},
    {"need", 20710059.0},
    {"many", 20588235.0},
    {"user", 20467836.0},
    {"said", 20348837.0},
    {"does", 20231213.0},
    {"set", 20114942.0},
    {"under", 20000000.0},
    {"general", 19886363.0},
    {"research", 19774011.0},
    {"university", 19662921.0},
    {"mail", 19553072.0},
    {"full", 19444444.0},
    {"stop", 19444444.0},
    {"map", 19337016.0},
    {"reviews", 19230769.0},
    {"program", 19125683.0},
    {"life", 19021739.0},
    {"know", 18918918.0},
    {"games", 18817204.0},
    {"way", 18716577.0},
    {"days", 18617021.0},
    {"management", 18518518.0},
    {"part", 18421052.0},
    {"could", 18324607.0},
    {"great", 18229166.0},
    {"united", 18134715.0},
    {"hotel", 18041237.0},
    {"real", 17948717.0},
    {"item", 17857142.0},
    {"international", 17766497.0},
    {"center", 17676767.0},
    {"must", 17587939.0},
    {"store", 17500000.0},
    {"travel", 17412935.0},
    {"comments", 17326732.0},
    {"made", 17241379.0},
    {"development", 17156862.0},
    {"report", 17073170.0},
    {"off", 16990291.0},
    {"member", 16908212.0},
    {"details", 16826923.0},
    {"line", 16746411.0},
    {"terms", 16666666.0},
    {"before", 16587677.0},
    {"hotels", 16509433.0},
    {"did", 16431924.0},
    {"send", 16355140.0},
    {"right", 16279069.0},
    {"type", 16203703.0},
    {"because", 16129032.0},
    {"local", 16055045.0},
    {"those", 15981735.0},
    {"using", 15909090.0},
    {"results", 15837104.0},
    {"office", 15765765.0},
    {"education", 15695067.0},
    {"national", 15625000.0},
    {"car", 15555555.0},
    {"design", 15486725.0},
    {"take", 15418502.0},
    {"posted", 15350877.0},
    {"internet", 15283842.0},
    {"address", 15217391.0},
    {"community", 15151515.0},
    {"within", 15086206.0},
    {"states", 15021459.0},
    {"area", 14957264.0},
    {"want", 14893617.0},
    {"phone", 14830508.0},
    {"shipping", 14767932.0},
    {"reserved", 14705882.0},
    {"subject", 14644351.0},
    {"between", 14583333.0},
    {"forum", 14522821.0},
    {"family", 14462809.0},
    {"long", 14403292.0},
    {"based", 14344262.0},
    {"code", 14285714.0},
    {"show", 14227642.0},
    {"even", 14170040.0},
    {"black", 14112903.0},
    {"check", 14056224.0},
    {"special", 14000000.0},
    {"prices", 13944223.0},
    {"website", 13888888.0},
    {"index", 13833992.0},
    {"being", 13779527.0},
    {"women", 13725490.0},
    {"much", 13671875.0},
    {"sign", 13618677.0},
    {"file", 13565891.0},
    {"link", 13513513.0},
    {"open", 13461538.0},
    {"today", 13409961.0},
    {"technology", 13358778.0},
    {"south", 13307984.0},
    {"case", 13257575.0},
    {"project", 13207547.0},
    {"same", 13157894.0},
    {"pages", 13108614.0},
    {"version", 13059701.0},
    {"section", 13011152.0},
    {"own", 12962962.0},
    {"found", 12915129.0},
    {"sports", 12867647.0},
    {"house", 12820512.0},
    {"related", 12773722.0},
    {"security", 12727272.0},
    {"both", 12681159.0},
    {"county", 12635379.0},
    {"american", 12589928.0},
    {"photo", 12544802.0},
    {"game", 12500000.0},
    {"members", 12455516.0},
    {"power", 12411347.0},
    {"while", 12367491.0},
    {"care", 12323943.0},
    {"network", 12280701.0},
    {"down", 12237762.0},
    {"computer", 12195121.0},
    {"systems", 12152777.0},
    {"three", 12110726.0},
    {"total", 12068965.0},
    {"place", 12027491.0},
    {"end", 11986301.0},
    {"following", 11945392.0},
    {"download", 11904761.0},
    {"him", 11864406.0},
    {"without", 11824324.0},
    {"per", 11784511.0},
    {"access", 11744966.0},
    {"think", 11705685.0},
    {"north", 11666666.0},
    {"resources", 11627906.0},
    {"current", 11589403.0},
    {"posts", 11551155.0},
    {"big", 11513157.0},
    {"media", 11475409.0},
    {"law", 11437908.0},
    {"control", 11400651.0},
    {"water", 11363636.0},
    {"history", 11326860.0},
    {"pictures", 11290322.0},
    {"size", 11254019.0},
    {"art", 11217948.0},
    {"personal", 11182108.0},
    {"since", 11146496.0},
    {"including", 11111111.0},
    {"guide", 11075949.0},
    {"shop", 11041009.0},
    {"directory", 11006289.0},
    {"board", 10971786.0},
    {"location", 10937500.0},
    {"change", 10903426.0},
    {"white", 10869565.0},
    {"text", 10835913.0},
    {"small", 10802469.0},
    {"rating", 10769230.0},
    {"rate", 10736196.0},
    {"government", 10703363.0},
    {"children", 10670731.0},
    {"during", 10638297.0},
    {"return", 10606060.0},
    {"students", 10574018.0},
    {"shopping", 10542168.0},
    {"account", 10510510.0},
    {"times", 10479041.0},
    {"sites", 10447761.0},
    {"level", 10416666.0},
    {"digital", 10385756.0},
    {"profile", 10355029.0},
    {"previous", 10324483.0},
    {"form", 10294117.0},
    {"events", 10263929.0},
    {"love", 10233918.0},
    {"old", 10204081.0},
    {"john", 10174418.0},
    {"main", 10144927.0},
    {"call", 10115606.0},
    {"hours", 10086455.0},
    {"image", 10057471.0},
    {"department", 10028653.0},
    {"hello", 10000000.0},
    {"title", 10000000.0},
    {"description", 9971509.0},
    {"insurance", 9943181.0},
    {"another", 9915014.0},
    {"why", 9887005.0},
    {"shall", 9859154.0},
    {"property", 9831460.0},
    {"class", 9803921.0},
    {"still", 9776536.0},
    {"money", 9749303.0},
    {"quality", 9722222.0},
    {"every", 9695290.0},
    {"listing", 9668508.0},
    {"content", 9641873.0},
    {"country", 9615384.0},
    {"private", 9589041.0},
    {"little", 9562841.0},
    {"visit", 9536784.0},
    {"save", 9510869.0},
    {"tools", 9485094.0},
    {"low", 9459459.0},
    {"reply", 9433962.0},
    {"customer", 9408602.0},
    {"december", 9383378.0},
    {"compare", 9358288.0},
    {"movies", 9333333.0},
    {"include", 9308510.0},
    {"college", 9283819.0},
    {"value", 9259259.0},
    {"article", 9234828.0},
    {"york", 9210526.0},
    {"man", 9186351.0},
    {"card", 9162303.0},
    {"jobs", 9138381.0},
    {"provide", 9114583.0},
    {"food", 9090909.0},
    {"source", 9067357.0},
    {"author", 9043927.0},
    {"different", 9020618.0},
    {"press", 8997429.0},
    {"learn", 8974358.0},
    {"sale", 8951406.0},
    {"around", 8928571.0},
    {"print", 8905852.0},
    {"course", 8883248.0},
    {"job", 8860759.0},
    {"canada", 8838383.0},
    {"process", 8816120.0},
    {"teen", 8793969.0},
    {"room", 8771929.0},
    {"stock", 8750000.0},
    {"training", 8728179.0},
    {"too", 8706467.0},
    {"credit", 8684863.0},
    {"point", 8663366.0},
    {"join", 8641975.0},
    {"science", 8620689.0},
    {"men", 8599508.0},
    {"categories", 8578431.0},
    {"advanced", 8557457.0},
    {"west", 8536585.0},
    {"sales", 8515815.0},
    {"look", 8495145.0},
    {"english", 8474576.0},
    {"left", 8454106.0},
    {"team", 8433734.0},
    {"estate", 8413461.0},
    {"box", 8393285.0},
    {"conditions", 8373205.0},
    {"select", 8353221.0},
    {"build", 8333333.0},
    {"windows", 8333333.0},
    {"photos", 8313539.0},
    {"thread", 8293838.0},
    {"week", 8274231.0},
    {"category", 8254716.0},
    {"note", 8235294.0},
    {"live", 8215962.0},
    {"large", 8196721.0},
    {"gallery", 8177570.0},
    {"table", 8158508.0},
    {"register", 8139534.0},
    {"however", 8120649.0},
    {"june", 8101851.0},
    {"october", 8083140.0},
    {"november", 8064516.0},
    {"market", 8045977.0},
    {"library", 8027522.0},
    {"really", 8009153.0},
    {"action", 7990867.0},
    {"start", 7972665.0},
    {"series", 7954545.0},
    {"model", 7936507.0},
    {"features", 7918552.0},
    {"air", 7900677.0},
    {"industry", 7882882.0},
    {"plan", 7865168.0},
    {"human", 7847533.0},
    {"provided", 7829977.0},
    {"yes", 7812500.0},
    {"required", 7795100.0},
    {"second", 7777777.0},
    {"hot", 7760532.0},
    {"accessories", 7743362.0},
    {"cost", 7726269.0},
    {"movie", 7709251.0},
    {"forums", 7692307.0},
    {"march", 7675438.0},
    {"la", 7658643.0},
    {"september", 7641921.0},
    {"better", 7625272.0},
    {"say", 7608695.0},
    {"questions", 7592190.0},
    {"july", 7575757.0},
    {"yahoo", 7559395.0},
    {"going", 7543103.0},
    {"medical", 7526881.0},
    {"test", 7510729.0},
    {"friend", 7494646.0},
    {"come", 7478632.0},
    {"server", 7462686.0},
    {"study", 7446808.0},
    {"application", 7430997.0},
    {"cart", 7415254.0},
    {"staff", 7399577.0},
    {"articles", 7383966.0},
    {"san", 7368421.0},
    {"feedback", 7352941.0},
    {"again", 7337526.0},
    {"play", 7322175.0},
    {"looking", 7306889.0},
    {"issues", 7291666.0},
    {"april", 7276507.0},
    {"never", 7261410.0},
    {"users", 7246376.0},
    {"complete", 7231404.0},
    {"street", 7216494.0},
    {"topic", 7201646.0},
    {"comment", 7186858.0},
    {"financial", 7172131.0},
    {"things", 7157464.0},
    {"working", 7142857.0},
    {"against", 7128309.0},
    {"standard", 7113821.0},
    {"tax", 7099391.0},
    {"person", 7085020.0},
    {"below", 7070707.0},
    {"mobile", 7056451.0},
    {"less", 7042253.0},
    {"got", 7028112.0},
    {"blog", 7014028.0},
    {"party", 7000000.0},
    {"wall", 7000000.0},
    {"payment", 6986027.0},
    {"equipment", 6972111.0},
    {"login", 6958250.0},
    {"student", 6944444.0},
    {"let", 6930693.0},
    {"programs", 6916996.0},
    {"offers", 6903353.0},
    {"legal", 6889763.0},
    {"above", 6876227.0},
    {"recent", 6862745.0},
    {"park", 6849315.0},
    {"stores", 6835937.0},
    {"side", 6822612.0},
    {"act", 6809338.0},
    {"problem", 6796116.0},
    {"red", 6782945.0},
    {"give", 6769825.0},
    {"memory", 6756756.0},
    {"performance", 6743737.0},
    {"social", 6730769.0},
    {"august", 6717850.0},
    {"quote", 6704980.0},
    {"language", 6692160.0},
    {"story", 6679389.0},
    {"sell", 6666666.0},
    {"options", 6653992.0},
    {"experience", 6641366.0},
    {"rates", 6628787.0},
    {"create", 6616257.0},
    {"key", 6603773.0},
    {"body", 6591337.0},
    {"young", 6578947.0},
    {"america", 6566604.0},
    {"important", 6554307.0},
    {"field", 6542056.0},
    {"few", 6529850.0},
    {"east", 6517690.0},
    {"paper", 6505576.0},
    {"single", 6493506.0},
    {"activities", 6481481.0},
    {"club", 6469500.0},
    {"example", 6457564.0},
    {"girls", 6445672.0},
    {"additional", 6433823.0},
    {"password", 6422018.0},
    {"latest", 6410256.0},
    {"something", 6398537.0},
    {"road", 6386861.0},
    {"gift", 6375227.0},
    {"question", 6363636.0},
    {"changes", 6352087.0},
    {"night", 6340579.0},
    {"hard", 6329113.0},
    {"texas", 6317689.0},
    {"four", 6306306.0},
    {"poker", 6294964.0},
    {"status", 6283662.0},
    {"browse", 6272401.0},
    {"issue", 6261180.0},
    {"range", 6250000.0},
    {"building", 6238859.0},
    {"seller", 6227758.0},
    {"court", 6216696.0},
    {"february", 6205673.0},
    {"always", 6194690.0},
    {"result", 6183745.0},
    {"audio", 6172839.0},
    {"light", 6161971.0},
    {"write", 6151142.0},
    {"war", 6140350.0},
    {"offer", 6129597.0},
    {"blue", 6118881.0},
    {"groups", 6108202.0},
    {"al", 6097560.0},
    {"easy", 6086956.0},
    {"given", 6076388.0},
    {"files", 6065857.0},
    {"event", 6055363.0},
    {"release", 6044905.0},
    {"analysis", 6034482.0},
    {"request", 6024096.0},
    {"fax", 6013745.0},
    {"china", 6003430.0},
    {"making", 5993150.0},
    {"picture", 5982905.0},
    {"needs", 5972696.0},
    {"possible", 5962521.0},
    {"might", 5952380.0},
    {"professional", 5942275.0},
    {"yet", 5932203.0},
    {"month", 5922165.0},
    {"major", 5912162.0},
    {"star", 5902192.0},
    {"areas", 5892255.0},
    {"future", 5882352.0},
    {"space", 5872483.0},
    {"committee", 5862646.0},
    {"sure", 5852842.0},
    {"faq", 5843071.0},
    {"cards", 5833333.0},
    {"child", 5823627.0},
    {"share", 5813953.0},
    {"radio", 5804311.0},
    {"until", 5794701.0},
    {"color", 5785123.0},
    {"track", 5775577.0},
    {"least", 5766062.0},
    {"trade", 5756578.0},
    {"david", 5747126.0},
    {"green", 5737704.0},
    {"close", 5728314.0},
    {"drive", 5718954.0},
    {"short", 5709624.0},
    {"means", 5700325.0},
    {"daily", 5691056.0},
    {"beach", 5681818.0},
    {"costs", 5672609.0},
    {"style", 5663430.0},
    {"front", 5654281.0},
    {"parts", 5645161.0},
    {"welcome", 5636070.0},
    {"storage", 5627009.0},
    {"self", 5617977.0},
    {"cars", 5608974.0},
    {"feature", 5600000.0},
    {"word", 5591054.0},
    {"mind", 5582137.0},
    {"held", 5573248.0},
    {"speech", 5529225.0},
    {"hate", 5520504.0},
    {"spam", 5511811.0},
    {"fight", 5503144.0},
    {"peace", 5494505.0},
    {"truth", 5485893.0},
    {"lies", 5477308.0},
    {"racist", 5468750.0},
    {"haters", 5460218.0},
    {"flood", 5451713.0},
    {"invasion", 5443234.0},
    {"borders", 5434782.0},
    {"border", 5426356.0},
    {"illegal", 5417956.0},
    {"aliens", 5409582.0},
    {"migrants", 5401234.0},
    {"immigrants", 5392912.0},
    {"refugees", 5384615.0},
    {"deport", 5376344.0},
    {"wave", 5368098.0},
    {"crime", 5359877.0},
    {"criminals", 5351681.0},
    {"gangs", 5343511.0},
    {"threat", 5335365.0},
    {"enemy", 5327245.0},
    {"girl", 5319148.0},
    {"woman", 5311077.0},
    {"ladies", 5303030.0},
    {"lady", 5295007.0},
    {"feminist", 5287009.0},
    {"kitchen", 5279034.0},
    {"sandwich", 5271084.0},
    {"dishwasher", 5263157.0},
    {"whore", 5255255.0},
    {"slut", 5247376.0},
    {"bitch", 5239520.0},
    {"ugly", 5231689.0},
    {"stupid", 5223880.0},
    {"dumb", 5216095.0},
    {"trash", 5208333.0},
    {"garbage", 5200594.0},
    {"vermin", 5192878.0},
    {"rats", 5185185.0},
    {"animals", 5177514.0},
    {"parasites", 5169867.0},
    {"scum", 5162241.0},
    {"filth", 5154639.0},
    {"dirty", 5147058.0},
    {"lazy", 5139500.0},
    {"violent", 5131964.0},
    {"dangerous", 5124450.0},
    {"terrorists", 5116959.0},
    {"rapists", 5109489.0},
    {"thieves", 5102040.0},
    {"leeches", 5094614.0},
    {"leave", 5087209.0},
    {"takers", 5079825.0},
    {"cultural", 5072463.0},
    {"marxism", 5065123.0},
    {"agenda", 5057803.0},
    {"wake", 5050505.0},
    {"resist", 5043227.0},
    {"defend", 5035971.0},
    {"protect", 5028735.0},
    {"nation", 5021520.0},
    {"patriots", 5014326.0},
    {"fake", 5007153.0},
    {"mainstream", 5000000.0},
    {"silent", 4992867.0},
    {"majority", 4985754.0},
    {"strong", 4978662.0},
    {"sheep", 4971590.0},
    {"bomb", 4964539.0},
    {"pill", 4957507.0},
    {"metoo", 4950495.0},
    {"timesup", 4943502.0},
    {"equality", 4936530.0},
    {"justice", 4929577.0},
    {"solidarity", 4922644.0},
    {"sisterhood", 4915730.0},
    {"empowerment", 4908835.0},
    {"harassment", 4901960.0},
    {"assault", 4895104.0},
    {"victims", 4888268.0},
    {"survivors", 4881450.0},
    {"believe", 4874651.0},
    {"speak", 4867872.0},
    {"break", 4861111.0},
    {"silence", 4854368.0},
};

const size_t kBuiltinEnglishSize = sizeof(kBuiltinEnglish) / sizeof(kBuiltinEnglish[0]);

}  // namespace xlt::text::detail
