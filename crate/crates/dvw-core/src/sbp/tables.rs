// Coefficient tables for the diagonal-norm operator families.
// Local matrices are stored at unit spacing, row-major.
#![allow(clippy::excessive_precision, clippy::unreadable_literal)]

pub(super) const LOCAL2: [[f64; 3]; 3] = [
    [0.5, -0.5, 0.0],
    [-0.5, 1.0, -0.5],
    [0.0, -0.5, 0.5],
];

pub(super) const BOUNDARY2: [[[f64; 2]; 2]; 1] = [
    [
        [0.5, -0.5],
        [-0.5, 0.5],
    ],
];

pub(super) const LOCAL4: [[f64; 5]; 5] = [
    [1.0 / 24.0, -1.0 / 6.0, 1.0 / 8.0, 0.0, 0.0],
    [-1.0 / 6.0, 5.0 / 6.0, -1.0 / 2.0, -1.0 / 6.0, 0.0],
    [1.0 / 8.0, -1.0 / 2.0, 3.0 / 4.0, -1.0 / 2.0, 1.0 / 8.0],
    [0.0, -1.0 / 6.0, -1.0 / 2.0, 5.0 / 6.0, -1.0 / 6.0],
    [0.0, 0.0, 1.0 / 8.0, -1.0 / 6.0, 1.0 / 24.0],
];

pub(super) const BOUNDARY4: [[[f64; 8]; 8]; 6] = [
    [
        [0.7058823529411765, -0.8676470588235294, 0.11764705882352941, 0.04411764705882353, 0.0, 0.0, 0.0, 0.0],
        [-0.8676470588235294, 1.0664828431372548, -0.14460784313725492, -0.05422794117647059, 0.0, 0.0, 0.0, 0.0],
        [0.11764705882352941, -0.14460784313725492, 0.02038026017296142, 0.0050356900693504835, 0.00231725110712047, -0.0007724170357068916, 0.0, 0.0],
        [0.04411764705882353, -0.05422794117647059, 0.0050356900693504835, 0.009709106262537499, -0.006951753321361441, 0.0023172511071205826, 0.0, 0.0],
        [0.0, 0.0, 0.00231725110712047, -0.006951753321361441, 0.006951753321361374, -0.0023172511071204026, 0.0, 0.0],
        [0.0, 0.0, -0.0007724170357068916, 0.0023172511071205826, -0.0023172511071204026, 0.0007724170357067975, 0.0, 0.0],
        [0.0, 0.0, 0.0, 0.0, 0.0, 0.0, 0.0, 0.0],
        [0.0, 0.0, 0.0, 0.0, 0.0, 0.0, 0.0, 0.0],
    ],
    [
        [0.3072916666666667, 0.0, -0.3072916666666667, 0.0, 0.0, 0.0, 0.0, 0.0],
        [0.0, 0.0, 0.0, 0.0, 0.0, 0.0, 0.0, 0.0],
        [-0.3072916666666667, 0.0, 0.3080640837025007, -0.002317251107502089, 0.002317251107501951, -0.0007724170358339524, 0.0, 0.0],
        [0.0, 0.0, -0.002317251107502089, 0.006951753322506022, -0.0069517533225058065, 0.002317251107501868, 0.0, 0.0],
        [0.0, 0.0, 0.002317251107501951, -0.0069517533225058065, 0.006951753322505628, -0.0023172511075018306, 0.0, 0.0],
        [0.0, 0.0, -0.0007724170358339524, 0.002317251107501868, -0.0023172511075018306, 0.0007724170358339255, 0.0, 0.0],
        [0.0, 0.0, 0.0, 0.0, 0.0, 0.0, 0.0, 0.0],
        [0.0, 0.0, 0.0, 0.0, 0.0, 0.0, 0.0, 0.0],
    ],
    [
        [0.07827579882097445, -0.2852056990761124, 0.2596867940984087, -0.05891750938162991, 0.004885105334277443, 0.0012755102040816326, 0.0, 0.0],
        [-0.2852056990761124, 1.20719766134604, -0.985497334513597, 0.10182135955900838, -0.03532953224749032, -0.002986455067848623, 0.0, 0.0],
        [0.2596867940984087, -0.985497334513597, 1.400659555218081, -0.8858625995567478, 0.21330190102159705, -0.002288316267742005, 0.0, 0.0],
        [-0.05891750938162991, 0.10182135955900838, -0.8858625995567478, 1.0993764017991585, -0.2684462295892911, 0.012028577169501887, 0.0, 0.0],
        [0.004885105334277443, -0.03532953224749032, 0.21330190102159705, -0.2684462295892911, 0.09721269176569777, -0.011623936284791064, 0.0, 0.0],
        [0.0012755102040816326, -0.002986455067848623, -0.002288316267742005, 0.012028577169501887, -0.011623936284791064, 0.0035946202467982374, 0.0, 0.0],
        [0.0, 0.0, 0.0, 0.0, 0.0, 0.0, 0.0, 0.0],
        [0.0, 0.0, 0.0, 0.0, 0.0, 0.0, 0.0, 0.0],
    ],
    [
        [0.03355018157118241, -0.0763139087670249, 0.013291147078061854, 0.03563319565613971, -0.004885105334277443, -0.0012755102040816326, 0.0, 0.0],
        [-0.0763139087670249, 0.18465282885003853, -0.09906148901581477, -0.047593418382537785, 0.03532953224749032, 0.002986455067848623, 0.0, 0.0],
        [0.013291147078061854, -0.09906148901581477, 0.5203893779171078, -0.17783567043705328, -0.2611232388709339, 0.004339873328632198, 0.0, 0.0],
        [0.03563319565613971, -0.047593418382537785, -0.17783567043705328, 0.46273556504498886, -0.3797564235293657, 0.10681675164782807, 0.0, 0.0],
        [-0.004885105334277443, 0.03532953224749032, -0.2611232388709339, -0.3797564235293657, 0.7593232946862921, -0.14888805919920556, 0.0, 0.0],
        [-0.0012755102040816326, 0.002986455067848623, 0.004339873328632198, 0.10681675164782807, -0.14888805919920556, 0.03602048935897833, 0.0, 0.0],
        [0.0, 0.0, 0.0, 0.0, 0.0, 0.0, 0.0, 0.0],
        [0.0, 0.0, 0.0, 0.0, 0.0, 0.0, 0.0, 0.0],
    ],
    [
        [0.0, 0.0, 0.0, 0.0, 0.0, 0.0, 0.0, 0.0],
        [0.0, 0.0, 0.0, 0.0, 0.0, 0.0, 0.0, 0.0],
        [0.0, 0.0, 0.042173389656015796, -0.16818683563471395, 0.12652016896804724, -0.0005067229893491014, 0.0, 0.0],
        [0.0, 0.0, -0.16818683563471395, 0.8378938402374753, -0.5045605069041419, -0.1651464976986194, 0.0, 0.0],
        [0.0, 0.0, 0.12652016896804724, -0.5045605069041419, 0.7545605069041418, -0.5015201689680472, 0.125, 0.0],
        [0.0, 0.0, -0.0005067229893491014, -0.1651464976986194, -0.5015201689680472, 0.8338400563226823, -0.16666666666666666, 0.0],
        [0.0, 0.0, 0.0, 0.0, 0.125, -0.16666666666666666, 0.041666666666666664, 0.0],
        [0.0, 0.0, 0.0, 0.0, 0.0, 0.0, 0.0, 0.0],
    ],
    [
        [0.0, 0.0, 0.0, 0.0, 0.0, 0.0, 0.0, 0.0],
        [0.0, 0.0, 0.0, 0.0, 0.0, 0.0, 0.0, 0.0],
        [0.0, 0.0, -1.6600320097296305e-16, 1.3889487196099943e-16, 3.7040226756892736e-16, -2.426532791539588e-16, 0.0, 0.0],
        [0.0, 0.0, 1.3889487196099943e-16, 0.04166666666666708, -0.16666666666666743, 0.12500000000000033, 0.0, 0.0],
        [0.0, 0.0, 3.7040226756892736e-16, -0.16666666666666743, 0.8333333333333343, -0.5000000000000003, -0.16666666666666666, 0.0],
        [0.0, 0.0, -2.426532791539588e-16, 0.12500000000000033, -0.5000000000000003, 0.7500000000000001, -0.5, 0.125],
        [0.0, 0.0, 0.0, 0.0, -0.16666666666666666, -0.5, 0.8333333333333334, -0.16666666666666666],
        [0.0, 0.0, 0.0, 0.0, 0.0, 0.125, -0.16666666666666666, 0.041666666666666664],
    ],
];

pub(super) const LOCAL6: [[f64; 7]; 7] = [
    [1.0 / 180.0, -1.0 / 40.0, 1.0 / 20.0, -11.0 / 360.0, 0.0, 0.0, 0.0],
    [-1.0 / 40.0, 1.0 / 8.0, -3.0 / 10.0, 7.0 / 40.0, 1.0 / 40.0, 0.0, 0.0],
    [1.0 / 20.0, -3.0 / 10.0, 19.0 / 20.0, -17.0 / 40.0, -3.0 / 10.0, 1.0 / 40.0, 0.0],
    [-11.0 / 360.0, 7.0 / 40.0, -17.0 / 40.0, 101.0 / 180.0, -17.0 / 40.0, 7.0 / 40.0, -11.0 / 360.0],
    [0.0, 1.0 / 40.0, -3.0 / 10.0, -17.0 / 40.0, 19.0 / 20.0, -3.0 / 10.0, 1.0 / 20.0],
    [0.0, 0.0, 1.0 / 40.0, 7.0 / 40.0, -3.0 / 10.0, 1.0 / 8.0, -1.0 / 40.0],
    [0.0, 0.0, 0.0, -11.0 / 360.0, 1.0 / 20.0, -1.0 / 40.0, 1.0 / 180.0],
];

pub(super) const BOUNDARY6: [[[f64; 9]; 9]; 6] = [
    [
        [0.8959939819817706, -1.2720304979298573, 0.23233169398906295, 0.33295100273805844, -0.23081102408965454, 0.041564843310622046, 1.8356557596542475e-14, -6.523860809483046e-14, 1.0336390503921724e-14],
        [-1.2720304979298573, 2.07231093171398, -1.0005079380212183, 0.16770005110998348, 0.043640663088709286, -0.011113209961530063, 6.308742965859993e-16, 1.3577430130467682e-14, -1.637211300425253e-15],
        [0.23233169398906295, -1.0005079380212183, 1.7504825928683425, -1.5304887908323848, 0.6590649295404671, -0.11088248754432718, -1.181742936068493e-14, 9.126105377315746e-15, -3.132585926061188e-14],
        [0.33295100273805844, 0.16770005110998348, -1.5304887908323848, 1.6745896322158769, -0.7779717558960744, 0.13321986066455388, -9.249822622532919e-15, 1.2745117143732828e-14, -1.448315366778869e-14],
        [-0.23081102408965454, 0.043640663088709286, 0.6590649295404671, -0.7779717558960744, 0.370009362455569, -0.06393217509899826, -2.006392156534371e-15, -9.119115387163281e-15, 1.6523411984605537e-14],
        [0.041564843310622046, -0.011113209961530063, -0.11088248754432718, 0.13321986066455388, -0.06393217509899826, 0.01114316862967258, -6.229982883896916e-15, 3.6591937092622055e-15, 2.797686226720829e-15],
        [1.8356557596542475e-14, 6.308742965859993e-16, -1.181742936068493e-14, -9.249822622532919e-15, -2.006392156534371e-15, -6.229982883896916e-15, 2.104114666647663e-15, -2.2608203150580155e-15, 5.286733177572455e-15],
        [-6.523860809483046e-14, 1.3577430130467682e-14, 9.126105377315746e-15, 1.2745117143732828e-14, -9.119115387163281e-15, 3.6591937092622055e-15, -2.2608203150580155e-15, 4.1079976199274e-15, -3.1334558835803188e-15],
        [1.0336390503921724e-14, -1.637211300425253e-15, -3.132585926061188e-14, -1.448315366778869e-14, 1.6523411984605537e-14, 2.797686226720829e-15, 5.286733177572455e-15, -3.1334558835803188e-15, -6.081189738954607e-15],
    ],
    [
        [0.28275024865773957, -0.12703334052184875, 0.15747925767693566, -0.5372088308807632, 0.26794240341407616, -0.043929738346142534, 1.131488033475304e-14, -5.832857816565044e-15, 1.2688349035129858e-14],
        [-0.12703334052184875, 0.8256946006019154, -1.3043001612826521, 0.8171832683025115, -0.22104432888476008, 0.009499961784832006, -2.695137092978653e-15, -3.1380131544267294e-15, 3.9355580811386177e-16],
        [0.15747925767693566, -1.3043001612826521, 2.069845417477394, -1.2286746179887482, 0.31471826701033623, -0.00906816289327372, 7.224595269616613e-15, -3.2334780155730217e-15, -5.270040310329967e-16],
        [-0.5372088308807632, 0.8171832683025115, -1.2286746179887482, 1.4637576712160247, -0.5931103734842385, 0.07805288283522255, -1.1497455892416954e-15, 9.54370620173189e-15, -6.607623090508463e-15],
        [0.26794240341407616, -0.22104432888476008, 0.31471826701033623, -0.5931103734842385, 0.27344624108583837, -0.0419522091412496, -5.558549368617288e-15, 2.796844270970511e-15, -1.9411281798887355e-15],
        [-0.043929738346142534, 0.009499961784832006, -0.00906816289327372, 0.07805288283522255, -0.0419522091412496, 0.007397265760610263, 2.091494817156658e-15, 1.0640357709960738e-15, 2.6562894876201677e-15],
        [1.131488033475304e-14, -2.695137092978653e-15, 7.224595269616613e-15, -1.1497455892416954e-15, -5.558549368617288e-15, 2.091494817156658e-15, -4.579905072196285e-16, 8.629110002847944e-16, 1.5902347812678524e-15],
        [-5.832857816565044e-15, -3.1380131544267294e-15, -3.2334780155730217e-15, 9.54370620173189e-15, 2.796844270970511e-15, 1.0640357709960738e-15, 8.629110002847944e-16, -4.225012237663746e-15, 2.6426056247590373e-16],
        [1.2688349035129858e-14, 3.9355580811386177e-16, -5.270040310329967e-16, -6.607623090508463e-15, -1.9411281798887355e-15, 2.6562894876201677e-15, 1.5902347812678524e-15, 2.6426056247590373e-16, 8.813997457288372e-16],
    ],
    [
        [0.04674636660433496, -0.19197368319995353, 0.2993387437393255, -0.21512732944862073, 0.06580551490259319, -0.004789612597680664, -2.822444586159987e-15, 7.131130609297455e-15, -5.892160511297926e-17],
        [-0.19197368319995353, 0.8762315969099593, -1.151155514603998, 0.7076783957649206, -0.27020237879265785, 0.02942158392172895, 8.652209268930825e-16, 3.955287375560887e-15, 5.221956629911894e-15],
        [0.2993387437393255, -1.151155514603998, 1.9952745162645917, -1.548587132324152, 0.42875536206944687, -0.023625975145216013, -1.70981047395287e-15, -2.6275117594980226e-15, 1.1305891024005072e-16],
        [-0.21512732944862073, 0.7076783957649206, -1.548587132324152, 1.3657640753909488, -0.3149237862172976, 0.0051957768341997345, 1.347496787816193e-15, -6.695720177375395e-15, 3.3952677196131924e-15],
        [0.06580551490259319, -0.27020237879265785, 0.42875536206944687, -0.3149237862172976, 0.09863669738833256, -0.008071409350416836, 1.982770297628079e-15, 1.7035623640425587e-15, 3.111443531402943e-15],
        [-0.004789612597680664, 0.02942158392172895, -0.023625975145216013, 0.0051957768341997345, -0.008071409350416836, 0.0018696363373853046, -1.0112896652193104e-15, -5.606743445294873e-15, -3.564718580069443e-15],
        [-2.822444586159987e-15, 8.652209268930825e-16, -1.70981047395287e-15, 1.347496787816193e-15, 1.982770297628079e-15, -1.0112896652193104e-15, -8.227441017106537e-17, -1.4888353008283313e-16, 8.034405099029404e-17],
        [7.131130609297455e-15, 3.955287375560887e-15, -2.6275117594980226e-15, -6.695720177375395e-15, 1.7035623640425587e-15, -5.606743445294873e-15, -1.4888353008283313e-16, 3.780897640149977e-15, 1.2444119244464757e-15],
        [-5.892160511297926e-17, 5.221956629911894e-15, 1.1305891024005072e-16, 3.3952677196131924e-15, 3.111443531402943e-15, -3.564718580069443e-15, 8.034405099029404e-17, 1.2444119244464757e-15, 2.580802114931681e-15],
    ],
    [
        [0.04147428760923524, -0.18277485683829472, 0.246529965386246, -0.1506672871024376, -0.043557642796244765, 0.12922025747867077, -0.04022472373718092, -1.2412334639036118e-15, 1.1306865046871256e-15],
        [-0.18277485683829472, 0.8280988308199859, -1.1876142422928968, 0.7649874821621017, 0.16411439404266973, -0.5674765415113875, 0.1806649336178322, -3.227346759173219e-16, -1.6147536918437478e-15],
        [0.246529965386246, -1.1876142422928968, 1.9725341866420376, -1.149044515290559, -0.4886752917449839, 0.8817201379806094, -0.275450240680458, 3.2141370676283594e-15, -1.7007245288637352e-16],
        [-0.1506672871024376, 0.7649874821621017, -1.149044515290559, 1.8029299628998638, -1.3908233375271908, 0.053527149126546436, 0.06909054573167604, 2.503531699329392e-15, -1.2562466193344922e-15],
        [-0.043557642796244765, 0.16411439404266973, -0.4886752917449839, -1.3908233375271908, 2.6046514372884655, -1.046194219363307, 0.20048466010058402, -2.1208088116287608e-15, -3.007053245286762e-15],
        [0.12922025747867077, -0.5674765415113875, 0.8817201379806094, 0.053527149126546436, -1.046194219363307, 0.7342862032959272, -0.18508298700705517, 1.6486043554323492e-15, 4.0674121669462594e-15],
        [-0.04022472373718092, 0.1806649336178322, -0.275450240680458, 0.06909054573167604, 0.20048466010058402, -0.18508298700705517, 0.05051781197460011, 5.196422111106974e-16, 1.245366159380037e-16],
        [-1.2412334639036118e-15, -3.227346759173219e-16, 3.2141370676283594e-15, 2.503531699329392e-15, -2.1208088116287608e-15, 1.6486043554323492e-15, 5.196422111106974e-16, -2.0765042139880375e-15, -7.361990893399725e-16],
        [1.1306865046871256e-15, -1.6147536918437478e-15, -1.7007245288637352e-16, -1.2562466193344922e-15, -3.007053245286762e-15, 4.0674121669462594e-15, 1.245366159380037e-16, -7.361990893399725e-16, -3.2962377506612056e-15],
    ],
    [
        [0.10132746115626942, -0.3511789773173999, 0.319980667584437, 0.13070690039199212, -0.3235094554097838, 0.019933376408719172, 0.16317035489081677, -0.060430327705048796, 1.6014283713420092e-15],
        [-0.3511789773173999, 1.3107006442778844, -1.4610849923246532, -0.05947015304818841, 0.9186280790321758, -0.0839924137342801, -0.45455601132568113, 0.18095382444013605, 1.4137911798674998e-15],
        [0.319980667584437, -1.4610849923246532, 2.346929211988698, -1.127876469286264, -0.25185292519291247, 0.18232929588493124, 0.06725446541889103, -0.07567925407312603, -8.457661945913266e-16],
        [0.13070690039199212, -0.05947015304818841, -1.127876469286264, 2.146605909880406, -1.2672270781915427, -0.43502261541318465, 0.8533415994322742, -0.24105809376549334, 1.372656299398037e-16],
        [-0.3235094554097838, 0.9186280790321758, -0.25185292519291247, -1.2672270781915427, 1.9401990146759165, -0.7719387294423867, -0.43075324658314446, 0.1864543411116789, 1.1832217552840055e-15],
        [0.019933376408719172, -0.0839924137342801, 0.18232929588493124, -0.43502261541318465, -0.7719387294423867, 1.6654219516249733, -0.7335717938552888, 0.15684092852651926, -1.0737908290040535e-15],
        [0.16317035489081677, -0.45455601132568113, 0.06725446541889103, 0.8533415994322742, -0.43075324658314446, -0.7335717938552888, 0.7449081863547378, -0.2097935543326044, -8.583988037938843e-16],
        [-0.060430327705048796, 0.18095382444013605, -0.07567925407312603, -0.24105809376549334, 0.1864543411116789, 0.15684092852651926, -0.2097935543326044, 0.06271213579793894, -2.773316359785502e-16],
        [1.6014283713420092e-15, 1.4137911798674998e-15, -8.457661945913266e-16, 1.372656299398037e-16, 1.1832217552840055e-15, -1.0737908290040535e-15, -8.583988037938843e-16, -2.773316359785502e-16, 2.1763240942563356e-15],
    ],
    [
        [0.12146676605370527, -0.40184201730912167, 0.33263418628266994, 0.1720271044184998, -0.25959990122399246, -0.005437001433424871, -0.007188071842256102, 0.09073508220674725, -0.04279614715282655],
        [-0.40184201730912167, 1.4256638982693666, -1.449305413169655, -0.17425589184089682, 0.8390536108815941, -0.1261756358996513, -0.0022176170812956506, -0.2275305514322875, 0.11660961758194628],
        [0.33263418628266994, -1.449305413169655, 2.211736882889291, -1.0985234609759158, -0.4629718352151832, 0.48593172717095, -0.0418003360242377, 0.06688364371830455, -0.044585394676224285],
        [0.1720271044184998, -0.17425589184089682, -1.0985234609759158, 2.4158181032835966, -1.2193227483069073, -0.44378084535278733, 0.3566578141095632, 0.06977979862911435, -0.07839987396426758],
        [-0.25959990122399246, 0.8390536108815941, -0.4629718352151832, -1.2193227483069073, 1.944180185787129, -0.28943949860839535, -0.8322421525520767, 0.30516836394339253, -0.024826024705560525],
        [-0.005437001433424871, -0.1261756358996513, 0.48593172717095, -0.44378084535278733, -0.28943949860839535, 0.7143922617687285, -0.29645418939085355, -0.0987396198785947, 0.05970280162403001],
        [-0.007188071842256102, -0.0022176170812956506, -0.0418003360242377, 0.3566578141095632, -0.8322421525520767, -0.29645418939085355, 1.3160783530434057, -0.6232846878011834, 0.13045088753893408],
        [0.09073508220674725, -0.2275305514322875, 0.06688364371830455, 0.06977979862911435, 0.30516836394339253, -0.0987396198785947, -0.6232846878011834, 0.5887471263812123, -0.1717591557667038],
        [-0.04279614715282655, 0.11660961758194628, -0.044585394676224285, -0.07839987396426758, -0.024826024705560525, 0.05970280162403001, 0.13045088753893408, -0.1717591557667038, 0.05560328952067238],
    ],
];
